#!/usr/bin/env python3
"""
LogJet - Main Entry Point
Exact jet-differential, log-connection and degree-bound computations.

Usage:
    python main.py verify --suite all --seed 1 --size small
    python main.py verify --suite logconn --inject-fault nabla   # negative control, exits 1
    python main.py wronskian --sections "1,z1,z1^2"
    python main.py wronskian --sigma z1 --sections z1 --log
    python main.py nabla --sigma z1 --section "z1^2 + 1" --order 2 --leibniz
    python main.py tower --n 2 --k 2 --function "z1*z2" --order 2
    python main.py fermat config/families/example.fam --check all
    python main.py bounds --from 2 --to 5 --format json

Reports go to stdout, logs to stderr. Exit codes: 0 success, 1 identity
defect, 2 bad input.
"""

import argparse
import logging
import sys
from itertools import combinations
from pathlib import Path
from typing import List, Optional

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from config.settings import settings
from src.bounds import bounds_table
from src.exceptions import (
    FamilyFileError,
    LogJetError,
    NotDivisible,
    ParseError,
    PreconditionError,
    SingularFrame,
    TooSmall,
)
from src.fermat import (
    TotalChart,
    cramer_identity_check,
    default_frame,
    default_point,
    expected_rank,
    factorization_defects,
    plucker_factorization_defect,
    plucker_omega,
    rank_probe,
    system_decomposition_defect,
    system_residual,
)
from src.logconn import LogPair, nabla, verify_leibniz, wronskian_abs, wronskian_log
from src.logging_config import setup_logging
from src.models import CheckResult, FamilyReport, FermatFamily
from src.multipoly import Poly
from src.parser import FamilyFileParser, parse_poly, parse_polys
from src.suites import FAULTS, SIZES, SUITES, run_verify
from src.tower import MODES, TowerChart, gamma_weights, nabla_chart, omega_chart

EXIT_OK = 0
EXIT_DEFECT = 1
EXIT_USAGE = 2

USER_ERRORS = (ParseError, FamilyFileError, PreconditionError, TooSmall)
FERMAT_CHECKS = ("factor", "system", "plucker", "rank")

logger = logging.getLogger("logjet")


def _pair_for(sigma: Poly, polys: List[Poly]) -> LogPair:
    variables = set(sigma.variables)
    for poly in polys:
        variables.update(poly.variables)
    return LogPair(tuple(sorted(variables)), sigma)


# =============================================================================
# VERBS
# =============================================================================

def cmd_verify(args) -> int:
    seed = settings.seed if args.seed is None else args.seed
    size = args.size or settings.verify_size
    report = run_verify(args.suite, seed=seed, size=size, fault=args.inject_fault)
    print(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.success else EXIT_DEFECT


def cmd_wronskian(args) -> int:
    sections = parse_polys(args.sections)
    logger.info(f"🧮 Computing {'W_D' if args.log else 'W_abs'} of {len(sections)} sections")
    if args.log:
        sigma = parse_poly(args.sigma or "1")
        result = wronskian_log(sections, _pair_for(sigma, sections))
    else:
        result = wronskian_abs(sections)
    print(result)
    return EXIT_OK


def cmd_nabla(args) -> int:
    sigma = parse_poly(args.sigma)
    section = parse_poly(args.section)
    pair = _pair_for(sigma, [section])
    print(nabla(args.order, section, pair))
    if args.leibniz:
        defect = verify_leibniz(args.order, section, pair)
        print(f"leibniz_defect: {defect}")
        return EXIT_OK if defect.is_zero() else EXIT_DEFECT
    return EXIT_OK


def cmd_tower(args) -> int:
    chart = TowerChart(args.n, args.k, args.mode)
    if args.weights:
        print(", ".join(str(w) for w in gamma_weights(args.k)))
        return EXIT_OK
    if args.omega:
        print(omega_chart(parse_polys(args.omega), chart))
        return EXIT_OK
    if args.function is None:
        raise PreconditionError("tower needs --function, --omega or --weights", parameter="function")
    order = args.k if args.order is None else args.order
    print(nabla_chart(order, parse_poly(args.function), chart))
    return EXIT_OK


def _check_factor(fam: FermatFamily, chart: TotalChart) -> CheckResult:
    check = CheckResult(name="factor")
    try:
        defects = factorization_defects(fam, chart)
    except NotDivisible as exc:
        check.record(False, str(exc))
        return check
    for detail in defects:
        check.record(False, detail)
    if not defects:
        check.record(True)
    return check


def _check_system(fam: FermatFamily, chart: TotalChart, perturb: bool) -> CheckResult:
    check = CheckResult(name="system")
    perturbation = Poly.var("z1") if perturb else None
    for j in range(1, fam.k + 1):
        residual = system_residual(fam, j, chart, perturbation=perturbation)
        check.record(residual.is_zero(), f"residual j={j}: {residual}")
        check.record(system_decomposition_defect(fam, j, chart).is_zero(), f"decomposition j={j}")
    return check


def _check_plucker(fam: FermatFamily, chart: TotalChart) -> CheckResult:
    check = CheckResult(name="plucker")
    support = [index for index in fam.index_set() if not fam.coefficient(index).is_zero()]
    frame = fam.frame or default_frame(fam)
    subsets = list(combinations(support, fam.k))[:settings.plucker_subset_limit]
    for indices in subsets:
        label = " ".join(str(list(index)) for index in indices)
        check.record(plucker_factorization_defect(indices, fam, chart).is_zero(), f"factorization {label}")
        if fam.k >= 2:
            swapped = [indices[1], indices[0]] + list(indices[2:])
            omega = plucker_omega(indices, fam, chart)
            check.record(plucker_omega(swapped, fam, chart) == -omega, f"alternation {label}")
        try:
            check.record(cramer_identity_check(frame, indices, fam, chart).is_zero(), f"cramer {label}")
        except SingularFrame:
            check.skipped += 1
    if not subsets:
        logger.warning(f"⚠️ Fewer than k = {fam.k} nonzero coefficients; no Pluecker minors to check")
    return check


def _check_rank(fam: FermatFamily, chart: TotalChart) -> CheckResult:
    check = CheckResult(name="rank")
    try:
        rank = rank_probe(fam, chart)
    except (PreconditionError, SingularFrame) as exc:
        logger.warning(f"⚠️ Rank probe skipped: {exc}")
        check.skipped += 1
        return check
    expected = expected_rank(fam, default_point(fam))
    check.record(rank == expected, f"rank {rank} != expected {expected}")
    return check


def cmd_fermat(args) -> int:
    fam = FamilyFileParser().parse_file(args.family_file)
    if args.echo:
        print(fam.to_canonical_text(), end="")
    chart = TotalChart.for_family(fam)
    selected = FERMAT_CHECKS if args.check == "all" else (args.check,)
    report = FamilyReport(family=Path(args.family_file).name)
    for name in selected:
        logger.info(f"🔎 Fermat check: {name}", extra={"check": name})
        if name == "factor":
            report.checks.append(_check_factor(fam, chart))
        elif name == "system":
            report.checks.append(_check_system(fam, chart, args.perturb_graph))
        elif name == "plucker":
            report.checks.append(_check_plucker(fam, chart))
        else:
            report.checks.append(_check_rank(fam, chart))
    print(report.to_text())
    return EXIT_OK if report.success else EXIT_DEFECT


def cmd_bounds(args) -> int:
    report = bounds_table(args.n_from, args.n_to)
    print(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.all_pass else EXIT_DEFECT


COMMANDS = {
    "verify": cmd_verify,
    "wronskian": cmd_wronskian,
    "nabla": cmd_nabla,
    "tower": cmd_tower,
    "fermat": cmd_fermat,
    "bounds": cmd_bounds,
}


# =============================================================================
# ARGUMENTS
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logjet",
        description="LogJet - exact jet differentials, log connections and degree bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="Log level (DEBUG, INFO, WARNING, ERROR)")
    parser.add_argument("--json-logs", action="store_true", help="Emit logs as JSON lines on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run randomized identity suites")
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    verify.add_argument("--seed", type=int, default=None, help="Defaults to LOGJET_SEED or 1")
    verify.add_argument("--size", choices=tuple(SIZES), default=None)
    verify.add_argument("--inject-fault", choices=FAULTS, default=None, help="Negative control")
    verify.add_argument("--format", choices=("text", "json"), default="text")

    wronskian = sub.add_parser("wronskian", help="Absolute or logarithmic Wronskian")
    wronskian.add_argument("--sections", required=True, help='Comma-separated, e.g. "1,z1,z1^2"')
    wronskian.add_argument("--sigma", default=None, help="Divisor polynomial (log mode)")
    wronskian.add_argument("--log", action="store_true", help="Compute W_D instead of W_abs")

    nab = sub.add_parser("nabla", help="Higher-order log connection of one section")
    nab.add_argument("--sigma", required=True)
    nab.add_argument("--section", required=True)
    nab.add_argument("--order", type=int, required=True)
    nab.add_argument("--leibniz", action="store_true", help="Also print the Leibniz defect")

    tower = sub.add_parser("tower", help="Regular-chart tower operators")
    tower.add_argument("--n", type=int, required=True)
    tower.add_argument("--k", type=int, required=True)
    tower.add_argument("--function", default=None)
    tower.add_argument("--order", type=int, default=None, help="Defaults to k")
    tower.add_argument("--mode", choices=MODES, default=MODES[0])
    tower.add_argument("--omega", default=None, help="Comma-separated sections for omega_U")
    tower.add_argument("--weights", action="store_true", help="Print the Gamma weights for k")

    fermat = sub.add_parser("fermat", help="Checks on a Fermat family file")
    fermat.add_argument("family_file", type=Path)
    fermat.add_argument("--check", choices=FERMAT_CHECKS + ("all",), default="all")
    fermat.add_argument("--perturb-graph", action="store_true", help="Negative control: t := F + z1")
    fermat.add_argument("--echo", action="store_true", help="Print the parsed family first")

    bounds = sub.add_parser("bounds", help="Effective degree-bound table")
    bounds.add_argument("--from", dest="n_from", type=int, required=True)
    bounds.add_argument("--to", dest="n_to", type=int, required=True)
    bounds.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(
        level=args.log_level or settings.log_level,
        json_format=args.json_logs or settings.log_json_format,
        log_file=str(settings.log_file) if settings.log_file else None,
    )
    logger.debug(f"{'=' * 60}")
    logger.debug(f"LogJet {args.command}")

    try:
        return COMMANDS[args.command](args)
    except USER_ERRORS as exc:
        logger.error(f"❌ {exc}")
        return EXIT_USAGE
    except LogJetError as exc:
        # internal mismatches and other identity failures
        logger.error(f"❌ {type(exc).__name__}: {exc}")
        return EXIT_DEFECT


if __name__ == "__main__":
    sys.exit(main())
