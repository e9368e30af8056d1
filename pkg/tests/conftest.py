"""
LogJet - Test Fixtures
Shared fixtures for pytest tests.
"""

import pytest
from fractions import Fraction
from pathlib import Path

# Add project root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import settings
from src.fermat import TotalChart
from src.logconn import LogPair
from src.models import FermatFamily
from src.multipoly import Poly
from src.parser import FamilyFileParser


# =============================================================================
# POLYNOMIAL FIXTURES
# =============================================================================

@pytest.fixture
def z1() -> Poly:
    return Poly.var("z1")


@pytest.fixture
def z2() -> Poly:
    return Poly.var("z2")


@pytest.fixture
def pair_z1() -> LogPair:
    """Log pair on (z1, z2) with divisor z1 = 0."""
    return LogPair(("z1", "z2"), Poly.var("z1"))


# =============================================================================
# FERMAT FAMILY FIXTURES
# =============================================================================

@pytest.fixture
def example_family_path() -> Path:
    """The bundled example family file."""
    return settings.example_family_path


@pytest.fixture
def example_family(example_family_path) -> FermatFamily:
    return FamilyFileParser().parse_file(example_family_path)


@pytest.fixture
def two_term_family() -> FermatFamily:
    """n = 1, delta = 1, r = 2, k = 2 with a = (1, 1): F = 1 + z1^4."""
    z = Poly.var("z1")
    return FermatFamily(
        n=1, N=1, delta=1, epsilon=2, r=2, k=2,
        tau=(Poly.one(), z),
        a={(1, 0): Poly.one(), (0, 1): Poly.one()},
        frame=(z, z ** 2),
        point=(Fraction(2),),
    )


@pytest.fixture
def single_term_family() -> FermatFamily:
    """One nonzero coefficient: F = (z1 + 3) z1^3."""
    z = Poly.var("z1")
    return FermatFamily(
        n=1, N=1, delta=1, epsilon=1, r=2, k=1,
        tau=(Poly.one(), z),
        a={(0, 1): z + 3},
    )


@pytest.fixture
def chart_1d() -> TotalChart:
    return TotalChart(1)


@pytest.fixture
def family_file(tmp_path):
    """Write family text to a temporary .fam file and return its path."""
    def _write(text: str, name: str = "family.fam") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
