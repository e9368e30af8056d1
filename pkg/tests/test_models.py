"""
LogJet - Models Tests
Tests for the pydantic records: families, bound parameters and reports.
"""

import json
import pytest
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.models import (
    BoundParams,
    CheckResult,
    Decomposition,
    FamilyReport,
    FermatFamily,
    VerifyReport,
)
from src.multipoly import Poly

Z1 = Poly.var("z1")


def family(**overrides) -> FermatFamily:
    data = dict(
        n=1, N=1, delta=1, epsilon=2, r=2, k=2,
        tau=(Poly.one(), Z1), a={(1, 0): Poly.one(), (0, 1): Z1 + 1},
    )
    data.update(overrides)
    return FermatFamily(**data)


class TestFermatFamily:
    """Tests for FermatFamily validation."""

    def test_valid(self):
        """A well-formed family builds."""
        fam = family()
        assert fam.coordinates == ("z1",)
        assert fam.coefficient((0, 1)) == Z1 + 1

    def test_missing_coefficient_is_zero(self):
        """Indices absent from a have a_I = 0."""
        assert family(a={(1, 0): Poly.one()}).coefficient((0, 1)).is_zero()

    def test_wrong_index_size(self):
        """|I| must equal delta."""
        with pytest.raises(ValidationError):
            family(a={(1, 1): Poly.one()})

    def test_negative_index(self):
        """Exponent vectors are non-negative."""
        with pytest.raises(ValidationError):
            family(a={(2, -1): Poly.one()})

    def test_degree_above_epsilon(self):
        """deg a_I <= epsilon"""
        with pytest.raises(ValidationError):
            family(a={(1, 0): Z1 ** 3})

    def test_tau_count(self):
        """N + 1 tau sections are required."""
        with pytest.raises(ValidationError):
            family(tau=(Poly.one(),))

    def test_stray_variable(self):
        """Only z1..zn may appear."""
        with pytest.raises(ValidationError):
            family(a={(1, 0): Poly.var("z2")})

    def test_frame_size(self):
        """frame needs k sections."""
        with pytest.raises(ValidationError):
            family(frame=(Z1,))

    def test_index_set(self):
        """All |I| = delta vectors, decreasing."""
        assert family().index_set() == [(1, 0), (0, 1)]
        assert family(delta=2, a={}).index_set() == [(2, 0), (1, 1), (0, 2)]

    def test_canonical_text(self):
        """Keys print in a fixed order."""
        text = family(point=(Fraction(2),)).to_canonical_text()
        assert text.splitlines()[0] == "n = 1"
        assert "a[0,1] = z1 + 1" in text
        assert text.endswith("point = 2\n")


class TestBoundParams:
    """Tests for BoundParams validation."""

    def test_canonical(self):
        """n = 2: k = 3, delta = 11, k' = 6."""
        params = BoundParams(n=2, k=3, delta=11, k_prime=6, N_param=3)
        assert params.delta == 11

    def test_wrong_delta(self):
        """delta is fixed by n."""
        with pytest.raises(ValidationError):
            BoundParams(n=2, k=3, delta=10, k_prime=6, N_param=3)

    def test_epsilon_range(self):
        """epsilon must lie in [k, k + delta - 1]."""
        with pytest.raises(ValidationError):
            BoundParams(n=2, k=3, delta=11, k_prime=6, N_param=3, epsilon=2)

    def test_degree_identity(self):
        """m = epsilon + (r + k) delta"""
        BoundParams(n=2, k=3, delta=11, k_prime=6, N_param=3, epsilon=12, r=22617, m=248832)
        with pytest.raises(ValidationError):
            BoundParams(n=2, k=3, delta=11, k_prime=6, N_param=3, epsilon=12, r=22617, m=248833)

    def test_json_strings(self):
        """Integers serialize as decimal strings."""
        data = json.loads(BoundParams(n=2, k=3, delta=11, k_prime=6, N_param=3).model_dump_json())
        assert data["delta"] == "11"


class TestDecomposition:
    """Tests for degree decompositions."""

    def test_slack(self):
        """slack = r - r_lower"""
        d = Decomposition(m=248832, n=2, epsilon=12, r=22617, r_lower=16335, mode="kobayashi")
        assert d.slack == 6282


class TestReports:
    """Tests for check and run reports."""

    def test_record(self):
        """Failures are counted and at most five details are kept."""
        check = CheckResult(name="leibniz")
        check.record(True)
        for i in range(7):
            check.record(False, f"instance {i}")
        assert (check.passed, check.failed) == (1, 7)
        assert len(check.failures) == 5
        assert not check.success

    def test_verify_text(self):
        """Header, one line per check, verdict."""
        report = VerifyReport(suite="logconn", seed=1, size="small", checks=[CheckResult(name="a", passed=3)])
        lines = report.to_text().splitlines()
        assert lines[0] == "suite=logconn seed=1 size=small"
        assert lines[1] == "PASS a: passed=3 failed=0"
        assert lines[-1] == "RESULT: PASS"
        assert report.total_instances == 3

    def test_verify_json(self):
        """JSON carries the computed verdict."""
        report = VerifyReport(suite="jet", seed=2, size="small", checks=[CheckResult(name="a", failed=1)])
        data = json.loads(report.to_json())
        assert data["success"] is False
        assert data["checks"][0]["name"] == "a"

    def test_family_text_skipped(self):
        """Skipped counts appear only when nonzero."""
        report = FamilyReport(family="example", checks=[
            CheckResult(name="rank", passed=1, skipped=2),
            CheckResult(name="system", passed=2),
        ])
        lines = report.to_text().splitlines()
        assert lines[1] == "PASS rank: passed=1 failed=0 skipped=2"
        assert lines[2] == "PASS system: passed=2 failed=0"
        assert lines[-1] == "RESULT: PASS"
