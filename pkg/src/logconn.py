"""
LogJet - Logarithmic Connections and Wronskians
Higher-order log connections nabla^k_D s = sigma d^k(s/sigma), the Leibniz
identity, absolute and logarithmic Wronskians, and the change of basis
between d^j z / z and the formal jets d^j log z.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Sequence, Tuple

from .exceptions import InternalMismatch, NonTransverse, NotDivisible, PreconditionError
from .jetalg import JetPoly, Weight, divide_series, jet_derivation, jet_order_of, jet_part, parse_jet_var
from .multipoly import Poly, RatFunc, determinant, ratfunc_eq

logger = logging.getLogger(__name__)

ABS_FROM_LOG = "abs_from_log"
LOG_FROM_ABS = "log_from_abs"


# =============================================================================
# LOG PAIRS
# =============================================================================

@dataclass(frozen=True)
class LogPair:
    """Coordinate patch with divisor D = (sigma = 0)."""
    variables: Tuple[str, ...]
    sigma: Poly

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.sigma.is_zero():
            raise PreconditionError("sigma must not vanish identically", parameter="sigma")
        stray = set(self.sigma.variables) - set(self.variables)
        if stray:
            raise PreconditionError(f"sigma uses {sorted(stray)} outside {list(self.variables)}", parameter="sigma")
        if self.sigma.is_constant():
            logger.debug("ℹ️ Constant sigma: the divisor is empty and nabla reduces to d^k")

    @property
    def is_trivial(self) -> bool:
        """True when sigma is a unit and D is empty."""
        return self.sigma.is_constant()


class LogJetPoly:
    """
    numerator / sigma^pole in a log pair.

    Arithmetic keeps the denominator a pure power of sigma; `reduced`
    cancels sigma from the numerator where it divides exactly.
    """

    __slots__ = ("pair", "numerator", "pole")

    def __init__(self, pair: LogPair, numerator: Poly, pole: int = 0):
        if pole < 0:
            raise PreconditionError(f"negative pole order {pole}", parameter="pole")
        self.pair = pair
        self.numerator = Poly.coerce(numerator)
        self.pole = pole if not self.numerator.is_zero() else 0

    def as_jetpoly(self) -> JetPoly:
        return JetPoly(RatFunc(self.numerator, {self.pair.sigma: self.pole}))

    def reduced(self) -> "LogJetPoly":
        numerator, pole = self.numerator, self.pole
        while pole:
            try:
                numerator = numerator.exact_divide(self.pair.sigma)
            except NotDivisible:
                break
            pole -= 1
        return LogJetPoly(self.pair, numerator, pole)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    @property
    def order(self) -> int:
        return jet_order_of(self.numerator)

    def weight(self) -> Weight:
        return JetPoly(self.numerator).weight()

    # ------------------------------------------------------------------

    def _check_pair(self, other: "LogJetPoly") -> None:
        if other.pair.sigma != self.pair.sigma:
            raise PreconditionError("log jet polynomials live in different pairs", parameter="pair")

    def _lifted(self, pole: int) -> Poly:
        return self.numerator * self.pair.sigma ** (pole - self.pole)

    def __add__(self, other):
        if not isinstance(other, LogJetPoly):
            other = LogJetPoly(self.pair, Poly.coerce(other))
        self._check_pair(other)
        pole = max(self.pole, other.pole)
        return LogJetPoly(self.pair, self._lifted(pole) + other._lifted(pole), pole)

    __radd__ = __add__

    def __neg__(self) -> "LogJetPoly":
        return LogJetPoly(self.pair, -self.numerator, self.pole)

    def __sub__(self, other):
        if not isinstance(other, LogJetPoly):
            other = LogJetPoly(self.pair, Poly.coerce(other))
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LogJetPoly):
            return LogJetPoly(self.pair, self.numerator * Poly.coerce(other), self.pole)
        self._check_pair(other)
        return LogJetPoly(self.pair, self.numerator * other.numerator, self.pole + other.pole)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LogJetPoly):
            return self.as_jetpoly() == other.as_jetpoly()
        if isinstance(other, (int, Fraction, Poly, RatFunc, JetPoly)):
            return self.as_jetpoly() == other
        return NotImplemented

    __hash__ = None

    def __str__(self) -> str:
        return str(self.as_jetpoly())

    def __repr__(self) -> str:
        return f"LogJetPoly({self.numerator} / ({self.pair.sigma})^{self.pole})"


# =============================================================================
# CONNECTIONS
# =============================================================================

def nabla_numerators(k: int, s: Poly, sigma: Poly) -> List[Poly]:
    """
    N_0..N_k with nabla^j s = N_j / sigma^j, from the recursion
    nabla^j = d nabla^(j-1) - nabla^(j-1) d(sigma)/sigma.
    """
    if k < 0:
        raise PreconditionError(f"negative order {k}", parameter="k")
    d_sigma = jet_derivation(sigma)
    numerators = [Poly.coerce(s)]
    for j in range(1, k + 1):
        previous = numerators[-1]
        numerators.append(sigma * jet_derivation(previous) - (previous * d_sigma).scale(j))
    return numerators


def _closed_form(k: int, s: Poly, sigma: Poly) -> RatFunc:
    value = RatFunc(s, {sigma: 1})
    for _ in range(k):
        value = value.apply_derivation(jet_derivation)
    return value * sigma


def nabla(k: int, s: Poly, pair: LogPair, cross_check: bool = True) -> LogJetPoly:
    """nabla^k_D s; the recursive result is checked against sigma d^k(s/sigma)."""
    s = Poly.coerce(s)
    numerator = nabla_numerators(k, s, pair.sigma)[k]
    result = LogJetPoly(pair, numerator, k)
    if cross_check and k:
        closed = _closed_form(k, s, pair.sigma)
        if not ratfunc_eq(closed, RatFunc(numerator, {pair.sigma: k})):
            raise InternalMismatch(f"closed form and recursion disagree for nabla^{k}({s})", operation="nabla")
    return result


def leibniz_defect(k: int, s: Poly, sigma: Poly, numerators: Sequence[Poly]) -> RatFunc:
    """d^k s - sum_i C(k,i) N_i/sigma^i * d^(k-i) sigma / sigma, for given connection numerators."""
    derivs = [Poly.coerce(sigma)]
    for _ in range(k):
        derivs.append(jet_derivation(derivs[-1]))
    d_k_s = Poly.coerce(s)
    for _ in range(k):
        d_k_s = jet_derivation(d_k_s)
    defect = RatFunc(d_k_s)
    for i in range(k + 1):
        defect = defect - RatFunc((numerators[i] * derivs[k - i]).scale(comb(k, i)), {sigma: i + 1})
    return defect


def verify_leibniz(k: int, s: Poly, pair: LogPair) -> JetPoly:
    """Leibniz defect d^k s - sum_i C(k,i) nabla^i s d^(k-i) sigma / sigma; identically 0."""
    if k < 1:
        raise PreconditionError(f"Leibniz identity needs k >= 1, got {k}", parameter="k")
    numerators = nabla_numerators(k, s, pair.sigma)
    return JetPoly(leibniz_defect(k, s, pair.sigma, numerators), k)


# =============================================================================
# WRONSKIANS
# =============================================================================

def wronskian_abs(sections: Sequence[Poly]) -> JetPoly:
    """det(d^j s_i), 0 <= j <= k, for k + 1 sections."""
    sections = [Poly.coerce(s) for s in sections]
    if not sections:
        raise PreconditionError("Wronskian of no sections", parameter="sections")
    k = len(sections) - 1
    logger.debug(f"🧮 Computing W_abs of {k + 1} sections")
    rows = [sections]
    for _ in range(k):
        rows.append([jet_derivation(entry) for entry in rows[-1]])
    return JetPoly(determinant(rows), k)


def wronskian_log_from_numerators(columns: Sequence[Sequence[Poly]], pair: LogPair) -> LogJetPoly:
    """W_D from per-section connection numerators N_1..N_k (row j has pole j)."""
    k = len(columns)
    matrix = [[columns[i][j] for i in range(k)] for j in range(k)]
    return LogJetPoly(pair, determinant(matrix) if k else Poly.one(), k * (k + 1) // 2)


def wronskian_log(sections: Sequence[Poly], pair: LogPair, cross_check: bool = False) -> LogJetPoly:
    """det(nabla^j s_i), 1 <= j <= k, for k sections; weight k(k+1)/2."""
    sections = [Poly.coerce(s) for s in sections]
    if not sections:
        raise PreconditionError("log Wronskian of no sections", parameter="sections")
    k = len(sections)
    logger.debug(f"🧮 Computing W_D of {k} sections, sigma = {pair.sigma}")
    columns = []
    for s in sections:
        if cross_check:
            nabla(k, s, pair, cross_check=True)
        columns.append(nabla_numerators(k, s, pair.sigma)[1:])
    return wronskian_log_from_numerators(columns, pair)


def non_log_defect(sections: Sequence[Poly], pair: LogPair) -> JetPoly:
    """sigma W_D(g_1..g_k) - W_abs(sigma, g_1..g_k); identically 0."""
    w_log = wronskian_log(sections, pair).as_jetpoly()
    w_abs = wronskian_abs([pair.sigma] + list(sections))
    return w_log * pair.sigma - w_abs


# =============================================================================
# LOG / ABSOLUTE JET BASES
# =============================================================================

def _basis_var(direction: str, i: int) -> str:
    return f"L{i}" if direction == ABS_FROM_LOG else f"u{i}"


@lru_cache(maxsize=64)
def log_basis_poly(j: int, direction: str) -> Poly:
    """
    abs_from_log: u_j = d^j z / z as a polynomial in L_i = d^i log z.
    log_from_abs: L_j as a polynomial in u_i.
    """
    if j < 1:
        raise PreconditionError(f"basis order must be >= 1, got {j}", parameter="j")
    if direction == ABS_FROM_LOG:
        # u_(j+1) = d(u_j) + u_1 u_j, with d(L_i) = L_(i+1)
        def derive(var: str) -> Poly:
            return Poly.var(f"L{int(var[1:]) + 1}")
        current = Poly.var("L1")
        for _ in range(1, j):
            current = current.derive(derive) + Poly.var("L1") * current
        return current
    if direction == LOG_FROM_ABS:
        # L_(j+1) = d(L_j), with d(u_i) = u_(i+1) - u_i u_1
        def derive(var: str) -> Poly:
            i = int(var[1:])
            return Poly.var(f"u{i + 1}") - Poly.var(f"u{i}") * Poly.var("u1")
        current = Poly.var("u1")
        for _ in range(1, j):
            current = current.derive(derive)
        return current
    raise PreconditionError(f"unknown direction {direction!r}", parameter="direction")


def log_basis_coeffs(j: int, direction: str) -> Dict[Tuple[int, ...], int]:
    """Integer coefficients b_(j,beta) keyed by beta = (beta_1, ..., beta_j), sum i beta_i = j."""
    poly = log_basis_poly(j, direction)
    coeffs = {}
    for mono, coeff in poly.terms.items():
        beta = tuple(mono.exponent(_basis_var(direction, i)) for i in range(1, j + 1))
        coeffs[beta] = int(coeff)
    return dict(sorted(coeffs.items(), reverse=True))


def log_derivatives(values: Sequence[Fraction]) -> List[Fraction]:
    """(log f)^(j)(0) for j = 1..k from raw derivatives (f(0), ..., f^(k)(0)), f(0) != 0."""
    values = [Fraction(v) for v in values]
    if not values or not values[0]:
        raise PreconditionError("log derivatives need f(0) != 0", parameter="values")
    k = len(values) - 1
    if k == 0:
        return []
    taylor = [v / factorial(i) for i, v in enumerate(values)]
    derivative = [(i + 1) * taylor[i + 1] for i in range(k)]
    h = divide_series(derivative, taylor, k - 1)
    return [factorial(j - 1) * h[j - 1] for j in range(1, k + 1)]


# =============================================================================
# RESTRICTION AND POLE ORDERS
# =============================================================================

def restrict(p: LogJetPoly, variable: str) -> LogJetPoly:
    """Set `variable` and all its jets to 0."""
    sigma = p.pair.sigma.compose({variable: Poly.zero()})
    if sigma.is_zero():
        raise NonTransverse(f"sigma = {p.pair.sigma} vanishes on {variable} = 0", variable=variable)
    zeros = {variable: Poly.zero()}
    for var in p.numerator.variables:
        coord, order = parse_jet_var(var)
        if order and coord == variable:
            zeros[var] = Poly.zero()
    pair = LogPair(tuple(v for v in p.pair.variables if v != variable), sigma)
    return LogJetPoly(pair, p.numerator.compose(zeros), p.pole)


def sharp_pole_defects(p: LogJetPoly) -> List[Tuple[str, int, int]]:
    """
    For sigma a single coordinate z: every jet monomial must have pole order at
    most its total exponent in the jets D^j z. Returns (monomial, pole, allowed)
    for each violation.
    """
    sigma = p.pair.sigma
    if len(sigma.variables) != 1 or sigma != Poly.var(sigma.variables[0]):
        raise PreconditionError(f"sharp pole orders need sigma to be a coordinate, got {sigma}", parameter="sigma")
    coord = sigma.variables[0]
    reduced = p.reduced()
    poles: Dict = {}
    for mono in reduced.numerator.terms:
        base, jets = jet_part(mono)
        pole = reduced.pole - base.exponent(coord)
        poles[jets] = max(poles.get(jets, 0), pole)
    defects = []
    for jets, pole in poles.items():
        allowed = sum(exp for var, exp in jets if parse_jet_var(var)[0] == coord)
        if pole > allowed:
            defects.append((str(Poly.monomial(dict(jets))), pole, allowed))
    return sorted(defects)
