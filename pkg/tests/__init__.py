# LogJet - Test package
