"""
LogJet - Jet Differential Algebra
Jet variables, the total derivation d, curve-jet pullbacks and the
rescaling / reparametrization actions on k-jets.

A JetPoly is a rational function whose numerator mixes base variables
(z1, t, ...) with jet variables D<j><coord>, and whose denominator only
involves base variables. Curve jets store raw derivatives f^(j)(0).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .exceptions import PoleAtBasepoint, PreconditionError
from .multipoly import JET_NAME_PATTERN, MultiIndex, Poly, RatFunc, Scalar

logger = logging.getLogger(__name__)


# =============================================================================
# JET VARIABLES
# =============================================================================

def jet_var(coord: str, order: int) -> str:
    """Name of d^order(coord); order 0 is the coordinate itself."""
    if order < 0:
        raise PreconditionError(f"negative jet order {order}", parameter="order")
    return coord if order == 0 else f"D{order}{coord}"


def parse_jet_var(name: str) -> Tuple[str, int]:
    """Split a variable name into (coordinate, order); base variables have order 0."""
    match = JET_NAME_PATTERN.match(name)
    if match:
        return match.group(2), int(match.group(1))
    return name, 0


def _next_jet(name: str) -> Poly:
    coord, order = parse_jet_var(name)
    return Poly.var(jet_var(coord, order + 1))


def jet_derivation(poly: Poly) -> Poly:
    """The derivation d on flat polynomials: x -> D1x, Djx -> D(j+1)x."""
    return poly.derive(_next_jet)


def jet_order_of(poly: Poly) -> int:
    return max((parse_jet_var(var)[1] for var in poly.variables), default=0)


def jet_part(mono: MultiIndex) -> Tuple[MultiIndex, MultiIndex]:
    """Split a monomial into (base part, jet part)."""
    base, jets = {}, {}
    for var, exp in mono:
        if parse_jet_var(var)[1]:
            jets[var] = exp
        else:
            base[var] = exp
    return MultiIndex.of(base), MultiIndex.of(jets)


def monomial_weight(mono: MultiIndex) -> int:
    """Weighted degree |alpha_1| + 2|alpha_2| + ... of a monomial."""
    return sum(parse_jet_var(var)[1] * exp for var, exp in mono)


class Weight(NamedTuple):
    kind: str                 # "isobaric", "mixed" or "zero"
    value: Optional[int] = None

    def __str__(self) -> str:
        if self.kind == "isobaric":
            return f"isobaric({self.value})"
        return self.kind


# =============================================================================
# JET POLYNOMIALS
# =============================================================================

class JetPoly:
    """
    Jet differential with rational-function coefficients.

    `order` is the jet-order bound k of the object. It is at least the
    highest jet order present and is carried through arithmetic as a max.
    """

    __slots__ = ("value", "order")

    def __init__(self, value: Union[Poly, RatFunc, Scalar], order: Optional[int] = None):
        value = RatFunc.coerce(value)
        for factor, _ in value.factors:
            if jet_order_of(factor):
                raise PreconditionError(f"jet variable in denominator factor {factor}", parameter="value")
        self.value = value
        self.order = max(jet_order_of(value.num), order or 0)

    @classmethod
    def coerce(cls, other) -> "JetPoly":
        if isinstance(other, JetPoly):
            return other
        return cls(other)

    # ------------------------------------------------------------------

    @property
    def numerator(self) -> Poly:
        return self.value.num

    def is_zero(self) -> bool:
        return self.value.is_zero()

    @property
    def terms(self) -> Dict[MultiIndex, RatFunc]:
        """Jet monomial -> base coefficient, the c_alpha(z) of the usual expansion."""
        grouped: Dict[MultiIndex, Dict[MultiIndex, Fraction]] = {}
        for mono, coeff in self.value.num.terms.items():
            base, jets = jet_part(mono)
            grouped.setdefault(jets, {})[base] = coeff
        denominator = dict(self.value.factors)
        return {jets: RatFunc(Poly(base_terms), denominator) for jets, base_terms in grouped.items()}

    def weight(self) -> Weight:
        weights = {monomial_weight(mono) for mono in self.value.num.terms}
        if not weights:
            return Weight("zero")
        if len(weights) == 1:
            return Weight("isobaric", weights.pop())
        return Weight("mixed")

    # ------------------------------------------------------------------

    def __add__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        return JetPoly(self.value + other.value, max(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "JetPoly":
        return JetPoly(-self.value, self.order)

    def __sub__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        return JetPoly(self.value - other.value, max(self.order, other.order))

    def __rsub__(self, other):
        return JetPoly.coerce(other) - self

    def __mul__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        return JetPoly(self.value * other.value, max(self.order, other.order))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "JetPoly":
        return JetPoly(self.value ** exponent, self.order)

    @staticmethod
    def _operand(other):
        if isinstance(other, JetPoly):
            return other
        if isinstance(other, (int, Fraction, Poly, RatFunc)):
            return JetPoly(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._operand(other)
        if other is NotImplemented:
            return other
        return self.value == other.value

    __hash__ = None

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"JetPoly({self.value}, order={self.order})"


def weight(p: JetPoly) -> Weight:
    return JetPoly.coerce(p).weight()


def total_derive(p: JetPoly) -> JetPoly:
    """Apply d: c(z) -> sum dc/dz_i D1z_i and D^j z_i -> D^(j+1) z_i, extended by Leibniz."""
    p = JetPoly.coerce(p)
    return JetPoly(p.value.apply_derivation(jet_derivation), p.order + 1)


def total_derive_n(p: JetPoly, times: int) -> JetPoly:
    result = JetPoly.coerce(p)
    for _ in range(times):
        result = total_derive(result)
    return result


# =============================================================================
# CURVE JETS AND REPARAMETRIZATIONS
# =============================================================================

@dataclass(frozen=True)
class CurveJet:
    """k-jet of a curve germ: per coordinate the raw derivatives (f(0), f'(0), ..., f^(k)(0))."""
    order: int
    derivs: Mapping[str, Tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 0:
            raise PreconditionError(f"negative jet order {self.order}", parameter="order")
        clean = {}
        for coord, values in self.derivs.items():
            if len(values) != self.order + 1:
                raise PreconditionError(
                    f"coordinate {coord} needs {self.order + 1} derivatives, got {len(values)}",
                    parameter="derivs",
                )
            clean[coord] = tuple(Fraction(v) for v in values)
        object.__setattr__(self, "derivs", clean)

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return tuple(self.derivs)

    @property
    def basepoint(self) -> Dict[str, Fraction]:
        return {coord: values[0] for coord, values in self.derivs.items()}

    def is_regular(self) -> bool:
        return self.order >= 1 and any(values[1] for values in self.derivs.values())

    def evaluation_point(self) -> Dict[str, Fraction]:
        """Values of every base and jet variable on this jet."""
        point = {}
        for coord, values in self.derivs.items():
            for j, value in enumerate(values):
                point[jet_var(coord, j)] = value
        return point

    def taylor(self, coord: str) -> List[Fraction]:
        return [value / factorial(j) for j, value in enumerate(self.derivs[coord])]

    @classmethod
    def from_taylor(cls, order: int, series: Mapping[str, Sequence[Fraction]]) -> "CurveJet":
        return cls(order, {
            coord: tuple(Fraction(c) * factorial(j) for j, c in enumerate(coeffs))
            for coord, coeffs in series.items()
        })


@dataclass(frozen=True)
class Reparam:
    """phi(t) = a1 t + a2 t^2 + ... + ak t^k with a1 != 0."""
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if not coeffs or not coeffs[0]:
            raise PreconditionError("reparametrization needs a1 != 0", parameter="coeffs")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def derivative_at_zero(self) -> Fraction:
        return self.coeffs[0]

    def series(self, k: int) -> List[Fraction]:
        """Taylor coefficients [0, a1, ..., ak], zero-padded or truncated to length k + 1."""
        out = [Fraction(0)] + list(self.coeffs[:k])
        return out + [Fraction(0)] * (k + 1 - len(out))

    def compose(self, inner: "Reparam") -> "Reparam":
        """self o inner, truncated at the larger of the two orders."""
        k = max(self.order, inner.order)
        composed = compose_series(self.series(k), inner.series(k), k)
        return Reparam(tuple(composed[1:]))


def _series_mul(a: Sequence[Fraction], b: Sequence[Fraction], k: int) -> List[Fraction]:
    out = [Fraction(0)] * (k + 1)
    for i, ai in enumerate(a[:k + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[:k + 1 - i]):
            out[i + j] += ai * bj
    return out


def compose_series(outer: Sequence[Fraction], inner: Sequence[Fraction], k: int) -> List[Fraction]:
    """Coefficients of outer(inner(t)) mod t^(k+1); inner must have zero constant term."""
    if inner and inner[0]:
        raise PreconditionError("inner series must vanish at 0", parameter="inner")
    result = [Fraction(0)] * (k + 1)
    power = [Fraction(1)] + [Fraction(0)] * k
    for c in outer[:k + 1]:
        if c:
            for j in range(k + 1):
                result[j] += c * power[j]
        power = _series_mul(power, inner, k)
    return result


def divide_series(num: Sequence[Fraction], den: Sequence[Fraction], k: int) -> List[Fraction]:
    """Coefficients of num / den mod t^(k+1); den must not vanish at 0."""
    if not den or not den[0]:
        raise PreconditionError("series division needs a unit denominator", parameter="den")
    num = list(num[:k + 1]) + [Fraction(0)] * (k + 1 - len(num[:k + 1]))
    out = []
    for j in range(k + 1):
        acc = num[j] - sum(out[i] * den[j - i] for i in range(j) if j - i < len(den))
        out.append(acc / den[0])
    return out


# =============================================================================
# OPERATIONS
# =============================================================================

def pullback_curve(p: JetPoly, f: CurveJet) -> Fraction:
    """Exact value P(j_k f), jet coordinates evaluated as raw derivatives."""
    p = JetPoly.coerce(p)
    if p.order > f.order:
        raise PreconditionError(f"jet order {p.order} exceeds curve jet order {f.order}", parameter="f")
    try:
        return p.value.evaluate(f.evaluation_point())
    except PoleAtBasepoint:
        logger.debug(f"⚠️ Pole at basepoint {f.basepoint} while pulling back {p}")
        raise


def _univariate_coeffs(poly: Poly, param: str) -> List[Fraction]:
    stray = set(poly.variables) - {param}
    if stray:
        raise PreconditionError(f"curve component involves {sorted(stray)} besides {param}", parameter="f")
    coeffs = [Fraction(0)] * (poly.degree_in(param) + 1)
    for mono, coeff in poly.terms.items():
        coeffs[mono.exponent(param)] += coeff
    return coeffs


def _curve_components(curve, coords: Optional[Sequence[str]]) -> Dict[str, Poly]:
    if isinstance(curve, Mapping):
        return {coord: Poly.coerce(poly) for coord, poly in curve.items()}
    curve = [Poly.coerce(poly) for poly in curve]
    if coords is None:
        coords = [f"z{i}" for i in range(1, len(curve) + 1)]
    if len(coords) != len(curve):
        raise PreconditionError(f"{len(curve)} components but {len(coords)} coordinate names", parameter="coords")
    return dict(zip(coords, curve))


def jet_of_poly_curve(curve, k: int, param: str = "t", coords: Optional[Sequence[str]] = None,
                      at: Scalar = 0) -> CurveJet:
    """
    k-jet at param = at of an explicit polynomial curve.

    `curve` is either a sequence of univariate polynomials (named z1, z2, ...
    unless `coords` is given) or a mapping coordinate -> polynomial.
    """
    if k < 0:
        raise PreconditionError(f"negative jet order {k}", parameter="k")
    at = Fraction(at)
    derivs = {}
    for coord, poly in _curve_components(curve, coords).items():
        coeffs = _univariate_coeffs(poly, param)
        values = []
        for j in range(k + 1):
            # f^(j)(at) = sum_i c_i * i!/(i-j)! * at^(i-j)
            total = Fraction(0)
            for i in range(j, len(coeffs)):
                if coeffs[i]:
                    total += coeffs[i] * Fraction(factorial(i), factorial(i - j)) * at ** (i - j)
            values.append(total)
        derivs[coord] = tuple(values)
    return CurveJet(k, derivs)


def jet_at(curve, k: int, at: Scalar, param: str = "t", coords: Optional[Sequence[str]] = None) -> CurveJet:
    return jet_of_poly_curve(curve, k, param=param, coords=coords, at=at)


def pullback_symbolic(p: JetPoly, curve, param: str = "t", coords: Optional[Sequence[str]] = None) -> RatFunc:
    """P along an explicit polynomial curve, as a rational function of the curve parameter."""
    p = JetPoly.coerce(p)
    components = _curve_components(curve, coords)
    images: Dict[str, Poly] = {}
    for coord, poly in components.items():
        current = poly
        for j in range(p.order + 1):
            images[jet_var(coord, j)] = current
            current = current.partial_derivative(param)
    missing = [var for var in p.value.variables if var not in images]
    if missing:
        raise PreconditionError(f"curve does not define {missing}", parameter="curve")
    return p.value.substitute(images)


def rescale(f: CurveJet, lam: Scalar) -> CurveJet:
    """C* action: the j-th derivative is scaled by lam^j."""
    lam = Fraction(lam)
    return CurveJet(f.order, {
        coord: tuple(value * lam ** j for j, value in enumerate(values))
        for coord, values in f.derivs.items()
    })


def reparametrize(f: CurveJet, phi: Reparam) -> CurveJet:
    """Jet of f o phi by truncated composition of Taylor series."""
    k = f.order
    if k == 0:
        return f
    inner = phi.series(k)
    return CurveJet.from_taylor(k, {
        coord: compose_series(f.taylor(coord), inner, k) for coord in f.derivs
    })


def invariance_defect(p: JetPoly, m: int, samples: Iterable[Tuple[CurveJet, Reparam]]) -> List[Fraction]:
    """Per sample, P(j_k(f o phi)) - phi'(0)^m P(j_k f)."""
    p = JetPoly.coerce(p)
    found = p.weight()
    if found.kind == "mixed" or (found.kind == "isobaric" and found.value != m):
        raise PreconditionError(f"expected isobaric({m}), got {found}", parameter="p")
    defects = []
    for f, phi in samples:
        moved = pullback_curve(p, reparametrize(f, phi))
        defects.append(moved - phi.derivative_at_zero ** m * pullback_curve(p, f))
    return defects
