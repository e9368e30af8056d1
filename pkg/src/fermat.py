"""
LogJet - Fermat Family Systems
Fermat-type families F(a) = sum_I a_I tau^{(r+k)I} in the total-space chart
(t, z1..zn) with divisor sigma = t: the tau^{rI} factorization of the
connection derivatives, the tautological system, Pluecker determinants,
the Cramer identity for the frame coordinates and the rank probe.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .exceptions import PreconditionError, SingularFrame
from .jetalg import CurveJet, JetPoly, jet_derivation, jet_of_poly_curve, jet_var
from .logconn import LogJetPoly, LogPair, nabla_numerators
from .models import FermatFamily
from .multipoly import Poly, RatFunc, determinant

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


@dataclass(frozen=True)
class TotalChart:
    """Chart (t, z1..zn) of the total space; the tautological section is t."""
    n: int

    @property
    def variables(self) -> Tuple[str, ...]:
        return ("t",) + tuple(f"z{i}" for i in range(1, self.n + 1))

    @property
    def sigma(self) -> Poly:
        return Poly.var("t")

    @property
    def pair(self) -> LogPair:
        return LogPair(self.variables, self.sigma)

    @classmethod
    def for_family(cls, fam: FermatFamily) -> "TotalChart":
        return cls(fam.n)


@dataclass(frozen=True)
class RankSample:
    """Evaluation point y and a curve jet in (t, z) through (t0, y), t0 != 0."""
    point: Tuple[Fraction, ...]
    curve: CurveJet


def _check_order(j: int, fam: FermatFamily) -> None:
    if not 1 <= j <= fam.k:
        raise PreconditionError(f"order must satisfy 1 <= j <= k = {fam.k}, got {j}", parameter="j")


def tau_power(fam: FermatFamily, index: Sequence[int], exponent: int) -> Poly:
    """prod_j tau_j^(exponent * I_j)."""
    result = Poly.one()
    for tau, part in zip(fam.tau, index):
        if part:
            result = result * tau ** (exponent * part)
    return result


def build_F(fam: FermatFamily) -> Poly:
    """sum_I a_I tau^{(r+k)I}."""
    total = Poly.zero()
    for index in fam.index_set():
        coeff = fam.coefficient(index)
        if not coeff.is_zero():
            total = total + coeff * tau_power(fam, index, fam.r + fam.k)
    return total


def section(fam: FermatFamily, index: Index, a_I: Poly = None) -> Poly:
    """s_I = a_I tau^{(r+k)I}."""
    a_I = fam.coefficient(index) if a_I is None else Poly.coerce(a_I)
    return a_I * tau_power(fam, index, fam.r + fam.k)


# =============================================================================
# FACTORIZATION
# =============================================================================

def alpha_column(index: Index, a_I: Poly, fam: FermatFamily, chart: TotalChart,
                 power: Optional[int] = None) -> List[Poly]:
    """Numerators of nabla^j_I(a_I), j = 1..k, each over t^j."""
    divisor = tau_power(fam, index, fam.r if power is None else power)
    numerators = nabla_numerators(fam.k, section(fam, index, a_I), chart.sigma)[1:]
    return [numerator.exact_divide(divisor) for numerator in numerators]


def nabla_factor(j: int, index: Index, a_I: Poly, fam: FermatFamily, chart: TotalChart,
                 power: Optional[int] = None) -> LogJetPoly:
    """
    nabla^j(a_I tau^{(r+k)I}) divided exactly by tau^{power I} (power defaults to r).

    Raises NotDivisible when the division leaves a remainder.
    """
    _check_order(j, fam)
    index = tuple(index)
    divisor = tau_power(fam, index, fam.r if power is None else power)
    numerator = nabla_numerators(j, section(fam, index, a_I), chart.sigma)[j]
    return LogJetPoly(chart.pair, numerator.exact_divide(divisor), j)


def alpha_matrix(indices: Sequence[Index], fam: FermatFamily, chart: TotalChart) -> List[List[LogJetPoly]]:
    """Rows j = 1..k, columns I: the quotients nabla^j_I(a_I)."""
    columns = [alpha_column(tuple(index), fam.coefficient(index), fam, chart) for index in indices]
    return [[LogJetPoly(chart.pair, column[j], j + 1) for column in columns] for j in range(fam.k)]


def factorization_defects(fam: FermatFamily, chart: TotalChart) -> List[str]:
    """Multiply every quotient back by tau^{rI} and compare with the connection numerator."""
    defects = []
    for index in fam.index_set():
        coeff = fam.coefficient(index)
        if coeff.is_zero():
            continue
        divisor = tau_power(fam, index, fam.r)
        numerators = nabla_numerators(fam.k, section(fam, index), chart.sigma)
        for j, quotient in enumerate(alpha_column(index, coeff, fam, chart), start=1):
            if quotient * divisor != numerators[j]:
                defects.append(f"I={list(index)} j={j}")
    return defects


# =============================================================================
# TAUTOLOGICAL SYSTEM
# =============================================================================

def _graph_images(g: Poly, j: int) -> Dict[str, Poly]:
    images = {"t": g}
    current = g
    for p in range(1, j + 1):
        current = jet_derivation(current)
        images[jet_var("t", p)] = current
    return images


def system_residual(fam: FermatFamily, j: int, chart: TotalChart, perturbation: Poly = None) -> JetPoly:
    """
    nabla^j(t - F) restricted to the graph t = F (plus an optional perturbation),
    with D^p t -> d^p(F). Identically 0 without perturbation.
    """
    _check_order(j, fam)
    F = build_F(fam)
    if F.is_zero():
        raise PreconditionError("all coefficients vanish; the family is empty", parameter="a")
    g = F if perturbation is None else F + Poly.coerce(perturbation)
    if g.is_zero():
        raise PreconditionError("perturbed graph is identically zero", parameter="perturbation")
    numerator = nabla_numerators(j, chart.sigma - F, chart.sigma)[j]
    residual = numerator.compose(_graph_images(g, j))
    return JetPoly(RatFunc(residual, {g: j}), j)


def system_decomposition_defect(fam: FermatFamily, j: int, chart: TotalChart) -> JetPoly:
    """nabla^j(t - F) + sum_I tau^{rI} nabla^j_I(a_I); identically 0."""
    _check_order(j, fam)
    total = nabla_numerators(j, chart.sigma - build_F(fam), chart.sigma)[j]
    for index in fam.index_set():
        coeff = fam.coefficient(index)
        if not coeff.is_zero():
            quotient = nabla_factor(j, index, coeff, fam, chart)
            total = total + tau_power(fam, index, fam.r) * quotient.numerator
    return JetPoly(RatFunc(total, {chart.sigma: j}), j)


# =============================================================================
# PLUECKER DETERMINANTS AND FRAMES
# =============================================================================

def _check_indices(indices: Sequence[Index], fam: FermatFamily) -> List[Index]:
    indices = [tuple(index) for index in indices]
    if len(indices) != fam.k:
        raise PreconditionError(f"need k = {fam.k} indices, got {len(indices)}", parameter="indices")
    valid = set(fam.index_set())
    for index in indices:
        if index not in valid:
            raise PreconditionError(f"{list(index)} is not an index with |I| = {fam.delta}", parameter="indices")
    return indices


def _pole(fam: FermatFamily) -> int:
    return fam.k * (fam.k + 1) // 2


def plucker_omega(indices: Sequence[Index], fam: FermatFamily, chart: TotalChart) -> LogJetPoly:
    """det(nabla^j_{I_q}(a_{I_q})), the log Pluecker coordinate."""
    indices = _check_indices(indices, fam)
    columns = [alpha_column(index, fam.coefficient(index), fam, chart) for index in indices]
    matrix = [[column[j] for column in columns] for j in range(fam.k)]
    return LogJetPoly(chart.pair, determinant(matrix), _pole(fam))


def plucker_factorization_defect(indices: Sequence[Index], fam: FermatFamily, chart: TotalChart) -> JetPoly:
    """tau^{r(I_1 + ... + I_k)} omega_I - W_D(s_{I_1}, ..., s_{I_k}); identically 0."""
    indices = _check_indices(indices, fam)
    omega = plucker_omega(indices, fam, chart)
    total_index = [sum(parts) for parts in zip(*indices)]
    columns = [nabla_numerators(fam.k, section(fam, index), chart.sigma)[1:] for index in indices]
    matrix = [[column[j] for column in columns] for j in range(fam.k)]
    defect = tau_power(fam, total_index, fam.r) * omega.numerator - determinant(matrix)
    return JetPoly(RatFunc(defect, {chart.sigma: _pole(fam)}), fam.k)


def default_frame(fam: FermatFamily) -> Tuple[Poly, ...]:
    """b_i = z1^i, i = 1..k."""
    z1 = Poly.var("z1")
    return tuple(z1 ** i for i in range(1, fam.k + 1))


def frame_matrix(frame: Sequence[Poly], fam: FermatFamily, chart: TotalChart) -> List[List[Poly]]:
    """Numerators of G_(j,i) = nabla^j(b_i), j = 1..k (row j over t^j)."""
    if len(frame) != fam.k:
        raise PreconditionError(f"frame needs k = {fam.k} sections, got {len(frame)}", parameter="frame")
    columns = [nabla_numerators(fam.k, Poly.coerce(b), chart.sigma)[1:] for b in frame]
    return [[column[j] for column in columns] for j in range(fam.k)]


def _replace_column(matrix: List[List], p: int, values: Sequence) -> List[List]:
    return [row[:p] + [values[j]] + row[p + 1:] for j, row in enumerate(matrix)]


def _cramer_numerators(G: List[List[Poly]], v: Sequence[Poly]) -> List[Poly]:
    return [determinant(_replace_column(G, p, v)) for p in range(len(G))]


def ell_solve(frame: Sequence[Poly], index: Index, a_I: Poly, fam: FermatFamily, chart: TotalChart) -> List[RatFunc]:
    """Solve G l = (nabla^1_I(a_I), ..., nabla^k_I(a_I)) by Cramer's rule."""
    G = frame_matrix(frame, fam, chart)
    det_G = determinant(G)
    if det_G.is_zero():
        raise SingularFrame("frame Wronskian matrix is singular", index=tuple(index))
    v = alpha_column(tuple(index), a_I, fam, chart)
    # row j of both G and v carries 1/t^j, which cancels in every ratio
    return [RatFunc(numerator) / det_G for numerator in _cramer_numerators(G, v)]


def cramer_identity_check(frame: Sequence[Poly], indices: Sequence[Index], fam: FermatFamily,
                          chart: TotalChart) -> RatFunc:
    """det[l^p_{I_q}] - omega_I / omega(b); identically 0 for a nonsingular frame."""
    indices = _check_indices(indices, fam)
    G = frame_matrix(frame, fam, chart)
    det_G = determinant(G)
    if det_G.is_zero():
        raise SingularFrame("frame Wronskian matrix is singular", index=tuple(indices))
    ell_numerators = [
        _cramer_numerators(G, alpha_column(index, fam.coefficient(index), fam, chart)) for index in indices
    ]
    L = [[ell_numerators[q][p] for q in range(fam.k)] for p in range(fam.k)]
    omega = plucker_omega(indices, fam, chart).numerator
    defect = determinant(L) - omega * det_G ** (fam.k - 1)
    return RatFunc(defect, {det_G: fam.k})


# =============================================================================
# RANK PROBE
# =============================================================================

def supported_indices(fam: FermatFamily, point: Sequence[Fraction]) -> List[Index]:
    """Indices I with tau^I(y) != 0."""
    values = dict(zip(fam.coordinates, (Fraction(v) for v in point)))
    taus = [tau.evaluate(values) for tau in fam.tau]
    return [
        index for index in fam.index_set()
        if all(value or not part for value, part in zip(taus, index))
    ]


def expected_rank(fam: FermatFamily, point: Sequence[Fraction]) -> int:
    return fam.k * len(supported_indices(fam, point))


def default_point(fam: FermatFamily) -> Tuple[Fraction, ...]:
    if fam.point is not None:
        return fam.point
    return tuple(Fraction(i + 1) for i in range(1, fam.n + 1))


def default_rank_curve(fam: FermatFamily, point: Sequence[Fraction] = None) -> RankSample:
    """Jet of t = 1 + s, z_i = y_i + s + i s^2 at s = 0."""
    point = tuple(Fraction(v) for v in (point if point is not None else default_point(fam)))
    s = Poly.var("s")
    curve = {"t": 1 + s}
    for i, y in enumerate(point, start=1):
        curve[f"z{i}"] = y + s + (s ** 2).scale(i)
    return RankSample(point, jet_of_poly_curve(curve, fam.k, param="s"))


def _monomials(variables: Sequence[str], degree: int) -> List[Poly]:
    monomials = []
    for total in range(degree + 1):
        for combo in combinations_with_replacement(variables, total):
            exponents: Dict[str, int] = {}
            for var in combo:
                exponents[var] = exponents.get(var, 0) + 1
            monomials.append(Poly.monomial(exponents))
    return monomials


def _pullback(numerator: Poly, pole: int, curve: CurveJet) -> Fraction:
    return JetPoly(RatFunc(numerator, {Poly.var("t"): pole})).value.evaluate(curve.evaluation_point())


def rank_probe(fam: FermatFamily, chart: TotalChart, sample: RankSample = None,
               frame: Sequence[Poly] = None) -> int:
    """
    Exact rank of a -> (l^p_I(a_I))_{I in I_y, p} at a curve jet through y,
    each a_I ranging over polynomials of degree <= epsilon.
    """
    if fam.epsilon < fam.k:
        raise PreconditionError(f"rank probe needs epsilon >= k, got {fam.epsilon} < {fam.k}", parameter="epsilon")
    sample = sample or default_rank_curve(fam)
    frame = tuple(frame or fam.frame or default_frame(fam))
    curve = sample.curve
    if curve.order < fam.k:
        raise PreconditionError(f"sample jet order {curve.order} < k = {fam.k}", parameter="sample")
    if not curve.derivs["t"][0]:
        raise PreconditionError("the sample must lie off the divisor t = 0", parameter="sample")

    G_symbolic = frame_matrix(frame, fam, chart)
    G = [[_pullback(entry, j + 1, curve) for entry in row] for j, row in enumerate(G_symbolic)]
    det_G = determinant(G)
    if not det_G:
        raise SingularFrame("frame is singular at the sample", index=tuple(sample.point))

    indices = supported_indices(fam, sample.point)
    monomials = _monomials(fam.coordinates, fam.epsilon)
    rows = len(indices) * fam.k
    columns: List[List[Fraction]] = []
    for block, index in enumerate(indices):
        for mono in monomials:
            v = [_pullback(q, j + 1, curve) for j, q in enumerate(alpha_column(index, mono, fam, chart))]
            ell = [value / det_G for value in _cramer_numerators(G, v)]
            column = [Fraction(0)] * rows
            column[block * fam.k:(block + 1) * fam.k] = ell
            columns.append(column)

    matrix = sympy.Matrix(rows, len(columns), lambda i, c: sympy.Rational(columns[c][i].numerator, columns[c][i].denominator))
    rank = int(matrix.rank())
    logger.info(f"📐 Rank probe at y={[str(v) for v in sample.point]}: rank {rank}, #I_y = {len(indices)}")
    return rank
