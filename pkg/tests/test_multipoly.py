"""
LogJet - Polynomial Arithmetic Tests
Tests for Poly, RatFunc and the module-level operations.
"""

import pytest
from fractions import Fraction
from pathlib import Path

import sympy
from hypothesis import given, settings, strategies as st

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.exceptions import NotDivisible, PoleAtBasepoint, PreconditionError
from src.multipoly import (
    MultiIndex,
    Poly,
    RatFunc,
    determinant,
    exact_divide,
    partial_derivative,
    poly_arith,
    ratfunc_eq,
    substitute,
)

Z1 = Poly.var("z1")
Z2 = Poly.var("z2")

small_coeffs = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw):
    """Random polynomials in z1, z2 of degree <= 3."""
    result = Poly.zero()
    for _ in range(draw(st.integers(min_value=0, max_value=4))):
        exponents = {"z1": draw(st.integers(0, 3)), "z2": draw(st.integers(0, 3))}
        result = result + Poly.monomial(exponents, draw(small_coeffs))
    return result


nonzero_polys = polys().filter(lambda p: not p.is_zero())

affine_polys = st.builds(
    lambda c0, c1, c2: Z1.scale(c1) + Z2.scale(c2) + c0, small_coeffs, small_coeffs, small_coeffs
)
nonzero_affine_polys = affine_polys.filter(lambda p: not p.is_zero())


@st.composite
def ratfuncs(draw):
    """num / den with both drawn from polys()."""
    return RatFunc.quotient(draw(polys()), draw(nonzero_polys))


def to_sympy(poly: Poly):
    x1, x2 = sympy.symbols("z1 z2")
    names = {"z1": x1, "z2": x2}
    total = sympy.Integer(0)
    for mono, coeff in poly.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for var, exp in mono:
            term *= names[var] ** exp
        total += term
    return sympy.expand(total)


class TestMultiIndex:
    """Tests for sparse exponent vectors."""

    def test_zero_exponents_dropped(self):
        """Absent and zero exponents are the same index."""
        assert MultiIndex.of({"z1": 2, "z2": 0}) == MultiIndex.of({"z1": 2})

    def test_degree(self):
        """|I| is the sum of exponents."""
        assert MultiIndex.of({"z1": 2, "z2": 3}).degree == 5

    def test_divides(self):
        """z1 divides z1^2 z2 but z2^2 does not."""
        big = MultiIndex.of({"z1": 2, "z2": 1})
        assert MultiIndex.of({"z1": 1}).divides(big)
        assert not MultiIndex.of({"z2": 2}).divides(big)


class TestPolyArith:
    """Tests for poly_arith and the ring operators."""

    def test_additive_inverse(self):
        """z1 + (-z1) is the zero polynomial."""
        assert poly_arith(Z1, -Z1, "add").is_zero()

    def test_difference_of_squares(self):
        """(z1 + 1)(z1 - 1) = z1^2 - 1"""
        assert poly_arith(Z1 + 1, Z1 - 1, "mul") == Z1 ** 2 - 1

    def test_mul_commutes(self):
        """z1*z2 == z2*z1"""
        assert poly_arith(Z1, Z2, "mul") == poly_arith(Z2, Z1, "mul")

    def test_unknown_operation(self):
        """Unknown operation names are rejected."""
        with pytest.raises(PreconditionError):
            poly_arith(Z1, Z2, "div")

    def test_rational_coefficients_exact(self):
        """Fractions stay exact: (z1/3) * 3 == z1"""
        assert Z1.scale(Fraction(1, 3)) * 3 == Z1

    def test_printing(self):
        """Terms print in graded-lex order with signs folded in."""
        assert str(Z1 ** 2 - 1) == "z1^2 - 1"
        assert str(Poly.zero()) == "0"
        assert str(Z1 * Z2 * 3 - Z2) == "3*z1*z2 - z2"

    def test_degree_of_zero(self):
        """The zero polynomial has degree -1."""
        assert Poly.zero().degree == -1

    @settings(max_examples=40, deadline=None)
    @given(polys(), polys(), polys())
    def test_ring_axioms(self, a, b, c):
        """Associativity and distributivity hold exactly."""
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=40, deadline=None)
    @given(polys(), polys())
    def test_product_matches_sympy(self, a, b):
        """Multiplication agrees with sympy's expansion."""
        assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


class TestPartialDerivative:
    """Tests for formal partial derivatives."""

    def test_monomial(self):
        """d(z1^2 z2)/dz1 = 2 z1 z2"""
        assert partial_derivative(Z1 ** 2 * Z2, "z1") == (Z1 * Z2).scale(2)

    def test_constant(self):
        """d(7)/dz1 = 0"""
        assert partial_derivative(Poly.const(7), "z1").is_zero()

    def test_other_variable(self):
        """d(z1^3 - z2)/dz2 = -1"""
        assert partial_derivative(Z1 ** 3 - Z2, "z2") == Poly.const(-1)

    @settings(max_examples=30, deadline=None)
    @given(polys())
    def test_matches_sympy(self, p):
        """Partial derivative agrees with sympy.diff."""
        x1 = sympy.Symbol("z1")
        assert sympy.expand(to_sympy(p.partial_derivative("z1")) - sympy.diff(to_sympy(p), x1)) == 0


class TestExactDivide:
    """Tests for exact polynomial division."""

    def test_divisible(self):
        """(2 z1^3 + z1^2 z2) / z1^2 = 2 z1 + z2"""
        assert exact_divide(Z1 ** 3 * 2 + Z1 ** 2 * Z2, Z1 ** 2) == Z1 * 2 + Z2

    def test_not_divisible(self):
        """(z1 + 1) / z1 raises NotDivisible."""
        with pytest.raises(NotDivisible):
            exact_divide(Z1 + 1, Z1)

    def test_zero_divisor(self):
        """Division by 0 is a precondition error."""
        with pytest.raises(PreconditionError):
            exact_divide(Z1, Poly.zero())

    @settings(max_examples=30, deadline=None)
    @given(polys(), polys())
    def test_multiply_back(self, a, b):
        """(a*b)/b == a whenever b != 0."""
        if b.is_zero():
            return
        assert exact_divide(a * b, b) == a


class TestSubstitute:
    """Tests for substitution into polynomials."""

    def test_polynomial_images(self):
        """z1 -> z2 + 1 in z1^2"""
        assert substitute(Z1 ** 2, {"z1": Z2 + 1}) == RatFunc(Z2 ** 2 + Z2 * 2 + 1)

    def test_rational_image(self):
        """z1 -> 1/z2 in z1 z2 gives 1."""
        result = substitute(Z1 * Z2, {"z1": RatFunc.quotient(1, Z2)})
        assert result == RatFunc(Poly.one())

    def test_unmapped_variables_stay(self):
        """Variables without an image are left alone."""
        assert substitute(Z1 + Z2, {"z1": Poly.zero()}) == RatFunc(Z2)

    @settings(max_examples=30, deadline=None)
    @given(polys(), polys(), affine_polys, nonzero_affine_polys, affine_polys)
    def test_ring_homomorphism(self, p, q, num, den, image):
        """Substitution respects + and *, also with a rational image."""
        mapping = {"z1": RatFunc.quotient(num, den), "z2": image}
        assert substitute(p + q, mapping) == substitute(p, mapping) + substitute(q, mapping)
        assert substitute(p * q, mapping) == substitute(p, mapping) * substitute(q, mapping)


class TestRatFunc:
    """Tests for rational functions with factored denominators."""

    def test_cross_multiplication_equality(self):
        """(z1^2 - 1)/(z1 - 1) == z1 + 1"""
        assert RatFunc.quotient(Z1 ** 2 - 1, Z1 - 1) == RatFunc(Z1 + 1)

    def test_variable_factors_cancel(self):
        """z1^2 / z1 simplifies to the polynomial z1."""
        value = RatFunc(Z1 ** 2, {Z1: 1})
        assert value.is_polynomial()
        assert value.as_poly() == Z1

    def test_sum(self):
        """1/z1 + 1/z2 == (z1 + z2)/(z1 z2)"""
        total = RatFunc.quotient(1, Z1) + RatFunc.quotient(1, Z2)
        assert total == RatFunc.quotient(Z1 + Z2, Z1 * Z2)

    def test_pole_at_basepoint(self):
        """Evaluating 1/z1 at z1 = 0 raises PoleAtBasepoint."""
        with pytest.raises(PoleAtBasepoint):
            RatFunc.quotient(1, Z1).evaluate({"z1": 0})

    def test_evaluate(self):
        """(z1 + 1)/z2 at (1, 4) is 1/2."""
        assert RatFunc.quotient(Z1 + 1, Z2).evaluate({"z1": 1, "z2": 4}) == Fraction(1, 2)

    def test_printing(self):
        """A single-term numerator over a variable prints without parentheses."""
        assert str(RatFunc(-Z1 * Z2, {Z2 ** 1 + 1: 1})) == "-z1*z2/(z2 + 1)"

    def test_printing_cancels_common_factors(self):
        """Factors dividing the numerator are cancelled before printing."""
        assert str(RatFunc(Z1 * 2 + 2, {Z1 * 2 + 2: 1})) == "1"
        assert str(RatFunc((Z1 + 1) * Z2, {Z1 + 1: 2})) == "z2/(z1 + 1)"
        assert str(RatFunc.quotient(Z1 ** 2 - 1, Z1 - 1)) == "z1 + 1"

    @settings(max_examples=30, deadline=None)
    @given(ratfuncs(), ratfuncs(), nonzero_polys, nonzero_polys)
    def test_equality_is_an_equivalence(self, a, other, c1, c2):
        """ratfunc_eq is reflexive, symmetric and transitive."""
        b = RatFunc.quotient(a.num * c1, a.den * c1)
        c = RatFunc.quotient(a.num * c2, a.den * c2)
        assert ratfunc_eq(a, a)
        assert ratfunc_eq(a, b) and ratfunc_eq(b, a)
        assert ratfunc_eq(b, c) and ratfunc_eq(a, c)
        assert ratfunc_eq(a, other) == ratfunc_eq(other, a)
        if ratfunc_eq(a, other):
            assert ratfunc_eq(b, other)


class TestDeterminant:
    """Tests for cofactor determinants."""

    def test_empty(self):
        """The 0x0 determinant is 1."""
        assert determinant([]) == 1

    def test_rational_matrix(self):
        """Matches sympy on a 3x3 rational matrix."""
        rows = [[Fraction(1), Fraction(2), Fraction(3)],
                [Fraction(0), Fraction(1, 2), Fraction(4)],
                [Fraction(5), Fraction(6), Fraction(0)]]
        expected = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows]).det()
        assert determinant(rows) == Fraction(int(expected.p), int(expected.q))

    def test_polynomial_entries(self):
        """det [[z1, z2], [1, 1]] = z1 - z2"""
        assert determinant([[Z1, Z2], [Poly.one(), Poly.one()]]) == Z1 - Z2

    def test_non_square(self):
        """Non-square input is rejected."""
        with pytest.raises(PreconditionError):
            determinant([[Z1, Z2]])
