"""
LogJet - Bound Arithmetic Tests
Tests for the degree bounds, decompositions, dimension audits and the
orbifold ceiling inequality.
"""

import json
import pytest
from fractions import Fraction
from pathlib import Path

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.bounds import (
    KOBAYASHI,
    SMT,
    asymptotic_ratio,
    basic_inequality,
    bound_row,
    bounds_table,
    corollary_bound,
    decompose_degree,
    dimension_audit,
    enumerate_weighted_indices,
    kobayashi_bound,
    orbifold_ceiling_check,
    params_for,
    r0,
    r_lower,
    smt_ratio,
    threshold,
)
from src.exceptions import PreconditionError, TooSmall


class TestParams:
    """Tests for the canonical parameters."""

    def test_n2(self):
        """n = 2 gives k = 3, delta = 11, k' = 6."""
        p = params_for(2)
        assert (p.k, p.delta, p.k_prime, p.N_param) == (3, 11, 6, 3)

    def test_n1_rejected(self):
        """Bounds need n >= 2."""
        with pytest.raises(PreconditionError):
            params_for(1)


class TestHeadlineBounds:
    """Tests for the two headline bounds."""

    def test_kobayashi_n2(self):
        """(n+2)^(n+3) (n+1)^(n+3) at n = 2"""
        assert kobayashi_bound(2) == 248832

    def test_corollary_n2(self):
        """(n^2 + 3n + 1)^(n+3) at n = 2"""
        assert corollary_bound(2) == 161051

    def test_exceeds_64_bits(self):
        """Bounds are exact big integers."""
        assert kobayashi_bound(8) == 90 ** 11 > 2 ** 64
        assert kobayashi_bound(10) == 12 ** 13 * 11 ** 13

    @pytest.mark.parametrize("n", range(2, 31))
    def test_basic_inequality(self, n):
        """k(k + delta - 1 + k delta) < (delta + 1)^2"""
        assert basic_inequality(n)


class TestThresholds:
    """Tests for thresholds and degree decompositions."""

    def test_r0(self):
        """r0 = delta^(k-1) (delta + 1)^2, smt uses (delta + 1)(delta + 3/2)."""
        assert r0(2, KOBAYASHI) == 17424
        assert r0(2, SMT) == Fraction(121 * 12 * 25, 2)

    def test_threshold_values(self):
        """Thresholds at n = 2."""
        assert threshold(2, KOBAYASHI) == 191719
        assert threshold(2, SMT) == 199705

    def test_decompose_bound(self):
        """248832 = 12 + (22617 + 3) * 11"""
        d = decompose_degree(248832, 2)
        assert (d.epsilon, d.r) == (12, 22617)
        assert d.r_lower == r_lower(2, 12, KOBAYASHI) == 16335
        assert d.slack == 22617 - 16335

    def test_decompose_too_small(self):
        """m = 47 is below every threshold."""
        with pytest.raises(TooSmall):
            decompose_degree(47, 2)

    def test_unknown_mode(self):
        """Only the two modes exist."""
        with pytest.raises(PreconditionError):
            decompose_degree(248832, 2, "other")

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("mode", [KOBAYASHI, SMT])
    def test_threshold_sweep(self, n, mode):
        """Every m in 500 consecutive values from the threshold decomposes."""
        start = threshold(n, mode)
        p = params_for(n)
        for m in range(start, start + 500):
            d = decompose_degree(m, n, mode)
            assert m == d.epsilon + (d.r + p.k) * p.delta
            assert p.k <= d.epsilon <= p.k + p.delta - 1
            assert d.r > d.r_lower

    def test_smt_ratio_n2(self):
        """726 / 6282 = 121 / 1047"""
        assert smt_ratio(2, kobayashi_bound(2)) == Fraction(121, 1047)

    @pytest.mark.parametrize("n", [2, 3])
    def test_smt_ratio_below_one(self, n):
        """The smt correction is small at the headline bound."""
        assert smt_ratio(n, kobayashi_bound(n)) < 1


class TestDimensionAudit:
    """Tests for the dimension counts."""

    @pytest.mark.parametrize("n", range(2, 21))
    def test_margins(self, n):
        """Both margins are negative and the index count suffices."""
        audit = dimension_audit(n)
        assert audit.exceptional_margin == -n - 1
        assert audit.regular_margin == -1
        assert audit.exceptional_ok and audit.regular_ok and audit.index_count_ok


class TestOrbifold:
    """Tests for the orbifold ceiling inequality."""

    def test_enumerate_small(self):
        """|a1| + 2|a2| = 2 in one variable."""
        assert set(enumerate_weighted_indices(2, 1, 2)) == {((0,), (1,)), ((2,), (0,))}

    def test_enumerate_weights(self):
        """Every generated tuple has the requested weight."""
        for alpha in enumerate_weighted_indices(3, 2, 6):
            assert sum(j * sum(a) for j, a in enumerate(alpha, start=1)) == 6

    def test_exhaustive(self):
        """The inequality holds for k <= 4, N <= 12, m <= 12."""
        for k in range(1, 5):
            for N in range(0, 13):
                grid = list(enumerate_weighted_indices(k, 2 if k <= 2 else 1, N))
                for m in range(1, 13):
                    assert all(orbifold_ceiling_check(alpha, m) for alpha in grid)

    def test_order_factor_reading_fails(self):
        """Weighting by j breaks the inequality already for alpha = (0; 1), m = 2."""
        assert orbifold_ceiling_check(((0,), (1,)), 2)
        assert not orbifold_ceiling_check(((0,), (1,)), 2, order_factor=True)

    def test_bad_m(self):
        """m >= 1"""
        with pytest.raises(PreconditionError):
            orbifold_ceiling_check(((1,),), 0)


class TestBoundsTable:
    """Tests for table rows and output."""

    def test_row_n2(self):
        """All exact flags hold at n = 2 and the main bound is larger."""
        row = bound_row(2)
        assert row.all_pass
        assert row.larger_headline == "main"
        assert row.kobayashi_threshold_below_bound and row.smt_threshold_below_bound

    def test_range_rejected(self):
        """n_from must be at least 2 and not above n_to."""
        with pytest.raises(PreconditionError):
            bounds_table(1, 2)
        with pytest.raises(PreconditionError):
            bounds_table(4, 3)

    def test_json_shape(self):
        """One object per n with integers as decimal strings."""
        rows = json.loads(bounds_table(2, 5).to_json())
        assert len(rows) == 4
        assert rows[0]["kobayashi_bound"] == "248832"
        assert rows[0]["smt_ratio"] == "121/1047"
        assert rows[0]["dimension"]["exceptional_margin"] == "-3"
        assert all(row["all_pass"] for row in rows)

    def test_json_stable(self):
        """Two runs serialize identically."""
        assert bounds_table(2, 4).to_json() == bounds_table(2, 4).to_json()

    def test_text_contains_bound(self):
        """The text table shows the n = 2 bound and a PASS verdict."""
        text = bounds_table(2, 2).to_text()
        assert "248832" in text
        assert text.endswith("RESULT: PASS")

    def test_asymptotic_ratio(self):
        """Informational decimal string, positive."""
        assert float(asymptotic_ratio(2)) > 0
