"""
LogJet - Jet Algebra Tests
Tests for jet variables, the total derivation, curve jets and the
rescaling / reparametrization actions.
"""

import pytest
from fractions import Fraction
from pathlib import Path

import sympy
from hypothesis import given, settings, strategies as st

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.exceptions import PreconditionError
from src.jetalg import (
    CurveJet,
    JetPoly,
    Reparam,
    invariance_defect,
    jet_at,
    jet_derivation,
    jet_of_poly_curve,
    jet_var,
    parse_jet_var,
    pullback_curve,
    pullback_symbolic,
    reparametrize,
    rescale,
    total_derive,
    total_derive_n,
    weight,
)
from src.multipoly import Poly, RatFunc

Z1 = Poly.var("z1")
Z2 = Poly.var("z2")
T = Poly.var("t")


def jv(coord: str, order: int) -> Poly:
    return Poly.var(jet_var(coord, order))


nonzero = st.integers(min_value=-3, max_value=3).filter(bool)


@st.composite
def curve_jets(draw, k=3, coords=("z1", "z2")):
    return CurveJet(k, {c: tuple(draw(st.integers(-3, 3)) for _ in range(k + 1)) for c in coords})


@st.composite
def reparams(draw, k=3):
    return Reparam(tuple([draw(nonzero)] + [draw(st.integers(-3, 3)) for _ in range(k - 1)]))


class TestJetVariables:
    """Tests for jet-variable naming."""

    def test_names(self):
        """d^2 z1 is called D2z1; order 0 is the coordinate."""
        assert jet_var("z1", 2) == "D2z1"
        assert jet_var("z1", 0) == "z1"

    def test_parse(self):
        """Names split back into (coordinate, order)."""
        assert parse_jet_var("D3z2") == ("z2", 3)
        assert parse_jet_var("t") == ("t", 0)

    def test_negative_order(self):
        """Negative orders are rejected."""
        with pytest.raises(PreconditionError):
            jet_var("z1", -1)


class TestTotalDerive:
    """Tests for the total derivation d."""

    def test_coordinate(self):
        """d(z1) = D1z1"""
        assert total_derive(JetPoly(Z1)) == JetPoly(jv("z1", 1))

    def test_jet_variable(self):
        """d(D1z1) = D2z1"""
        assert total_derive(JetPoly(jv("z1", 1))) == JetPoly(jv("z1", 2))

    def test_product(self):
        """d(z1^2) = 2 z1 D1z1"""
        assert total_derive(JetPoly(Z1 ** 2)) == JetPoly((Z1 * jv("z1", 1)).scale(2))

    def test_quotient(self):
        """d(1/z1) = -D1z1/z1^2"""
        result = total_derive(JetPoly(RatFunc.quotient(1, Z1)))
        assert result == JetPoly(RatFunc(-jv("z1", 1), {Z1: 2}))

    def test_order_increases(self):
        """The order bound grows by one per application."""
        assert total_derive_n(JetPoly(Z1), 3).order == 3

    def test_constant(self):
        """d(7) = 0"""
        assert total_derive(JetPoly(Poly.const(7))).is_zero()

    @settings(max_examples=30, deadline=None)
    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3))
    def test_leibniz_rule(self, a, b, e1, e2):
        """d(pq) = d(p) q + p d(q)"""
        p = JetPoly(Poly.monomial({"z1": e1}, a) + jv("z1", 1))
        q = JetPoly(Poly.monomial({"z2": e2}, b) + Z1)
        assert total_derive(p * q) == total_derive(p) * q + p * total_derive(q)

    def test_pullback_compatibility(self):
        """d P pulled back along a curve is the t-derivative of the pulled-back P."""
        curve = {"z1": T ** 3 + T * 2 + 1, "z2": T ** 2 - T}
        p = JetPoly(Z1 * jv("z2", 1) + jv("z1", 1) ** 2)
        lhs = pullback_symbolic(total_derive(p), curve)
        rhs = pullback_symbolic(p, curve).partial_derivative("t")
        assert lhs == rhs


class TestWeight:
    """Tests for weighted degree."""

    def test_isobaric(self):
        """D1z1^2 * D2z2 has weight 4."""
        w = weight(JetPoly(jv("z1", 1) ** 2 * jv("z2", 2)))
        assert (w.kind, w.value) == ("isobaric", 4)
        assert str(w) == "isobaric(4)"

    def test_base_coefficients_weight_zero(self):
        """Coefficients in z do not add weight."""
        assert weight(JetPoly(Z1 ** 5 * jv("z1", 2))).value == 2

    def test_mixed(self):
        """D1z1 + D2z1 is mixed."""
        assert str(weight(JetPoly(jv("z1", 1) + jv("z1", 2)))) == "mixed"

    def test_zero(self):
        """The zero jet differential has no weight."""
        assert str(weight(JetPoly(Poly.zero()))) == "zero"

    def test_derive_shifts_weight(self):
        """d raises the weight of an isobaric element by one."""
        p = JetPoly(Z2 * jv("z1", 1) * jv("z2", 1))
        assert weight(total_derive(p)).value == 3

    def test_jet_denominator_rejected(self):
        """Jet variables may not appear in denominators."""
        with pytest.raises(PreconditionError):
            JetPoly(RatFunc.quotient(1, jv("z1", 1)))


class TestCurveJets:
    """Tests for curve jets and pullbacks."""

    def test_jet_of_polynomial_curve(self):
        """Raw derivatives of z1 = 1 + 3t + 2t^2 at 0 are (1, 3, 4)."""
        f = jet_of_poly_curve([1 + T * 3 + (T ** 2).scale(2)], 2)
        assert f.derivs["z1"] == (1, 3, 4)

    def test_jet_matches_sympy(self):
        """jet_at agrees with sympy derivatives at a shifted point."""
        t = sympy.Symbol("t")
        expr = t ** 4 - 3 * t ** 2 + t
        f = jet_at([T ** 4 - (T ** 2).scale(3) + T], 3, at=2)
        expected = tuple(int(sympy.diff(expr, t, j).subs(t, 2)) for j in range(4))
        assert f.derivs["z1"] == expected

    def test_pullback(self):
        """D1z1 * z2 on (z1, z2) = (t, 2 + t^2) is 1 * 2."""
        f = jet_of_poly_curve([T, 2 + T ** 2], 2)
        assert pullback_curve(JetPoly(jv("z1", 1) * Z2), f) == 2

    def test_order_too_high(self):
        """Pulling back a 3-jet differential along a 2-jet is rejected."""
        f = jet_of_poly_curve([T], 2)
        with pytest.raises(PreconditionError):
            pullback_curve(JetPoly(jv("z1", 3)), f)

    def test_wrong_length(self):
        """Each coordinate needs order + 1 values."""
        with pytest.raises(PreconditionError):
            CurveJet(2, {"z1": (1, 2)})

    def test_taylor_round_trip(self):
        """from_taylor inverts taylor."""
        f = CurveJet(3, {"z1": (1, 2, 6, 12)})
        assert CurveJet.from_taylor(3, {"z1": f.taylor("z1")}) == f

    def test_regular(self):
        """A jet is regular when some first derivative is nonzero."""
        assert CurveJet(1, {"z1": (0, 1)}).is_regular()
        assert not CurveJet(1, {"z1": (5, 0)}).is_regular()


class TestActions:
    """Tests for the C* and reparametrization actions."""

    def test_reparam_requires_unit(self):
        """phi'(0) = 0 is not a reparametrization."""
        with pytest.raises(PreconditionError):
            Reparam((0, 1))

    def test_rescale(self):
        """The j-th derivative picks up lam^j."""
        f = CurveJet(2, {"z1": (1, 2, 3)})
        assert rescale(f, 2).derivs["z1"] == (1, 4, 12)

    def test_reparametrize_second_derivative(self):
        """(f o phi)'' = f'' phi'^2 + f' phi''"""
        f = CurveJet(2, {"z1": (0, 3, 5)})
        phi = Reparam((2, 7))            # phi = 2t + 7t^2, phi'' = 14
        assert reparametrize(f, phi).derivs["z1"] == (0, 6, 5 * 4 + 3 * 14)

    @settings(max_examples=30, deadline=None)
    @given(curve_jets(), st.integers(-3, 3).filter(bool))
    def test_rescale_equivariance(self, f, lam):
        """P(lam . f) = lam^m P(f) for P isobaric of weight m."""
        p = JetPoly(Z2 * jv("z1", 1) * jv("z2", 2) + jv("z1", 3))
        assert pullback_curve(p, rescale(f, lam)) == Fraction(lam) ** 3 * pullback_curve(p, f)

    @settings(max_examples=30, deadline=None)
    @given(curve_jets(), reparams(), reparams())
    def test_right_action(self, f, phi, psi):
        """(f o phi) o psi = f o (phi o psi)"""
        assert reparametrize(reparametrize(f, phi), psi) == reparametrize(f, phi.compose(psi))

    @settings(max_examples=30, deadline=None)
    @given(curve_jets(k=2), reparams(k=2))
    def test_invariant_differential(self, f, phi):
        """D1z1 D2z2 - D2z1 D1z2 is invariant of weight 3."""
        p = JetPoly(jv("z1", 1) * jv("z2", 2) - jv("z1", 2) * jv("z2", 1))
        assert invariance_defect(p, 3, [(f, phi)]) == [0]

    def test_non_invariant_differential(self):
        """D2z1 fails invariance: the defect is f'(0) phi''(0)."""
        f = CurveJet(2, {"z1": (0, 1, 0)})
        phi = Reparam((1, 1))
        assert invariance_defect(JetPoly(jv("z1", 2)), 2, [(f, phi)]) == [2]

    def test_invariance_needs_isobaric(self):
        """Mixed differentials have no invariance weight."""
        with pytest.raises(PreconditionError):
            invariance_defect(JetPoly(jv("z1", 1) + jv("z1", 2)), 1, [])

    def test_short_reparam_is_padded(self):
        """Missing higher coefficients of phi count as zero."""
        f = CurveJet(3, {"z1": (0, 1, 1, 1)})
        assert reparametrize(f, Reparam((2,))) == reparametrize(f, Reparam((2, 0, 0)))

    def test_derivation_on_flat_polys(self):
        """jet_derivation acts on a flat Poly directly."""
        assert jet_derivation(Z1 * Z2) == jv("z1", 1) * Z2 + Z1 * jv("z2", 1)
