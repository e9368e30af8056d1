"""
LogJet - Tower Chart Calculus
The explicit regular chart of the logarithmic Demailly tower in direction z_n:
vector fields xi_p, the operators nabla_U^j, the curve family gamma_(w,z)
and the chart Wronskian omega_U.

Chart coordinates are z1..zn at level 0 and z{i}_{j} (i < n) for the level-j
coordinate z_i^(j).
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exceptions import LevelViolation, PreconditionError
from .jetalg import CurveJet, JetPoly, jet_derivation, pullback_curve
from .logconn import nabla_numerators
from .multipoly import Poly, RatFunc, determinant

logger = logging.getLogger(__name__)

ChartFunction = Union[Poly, RatFunc]

AWAY = "away"
ADAPTED = "adapted"
MODES = (AWAY, ADAPTED)

_CHART_VAR = re.compile(r"^z(\d+)(?:_(\d+))?$")


def chart_var(i: int, level: int = 0) -> str:
    return f"z{i}" if level == 0 else f"z{i}_{level}"


def parse_chart_var(name: str) -> Tuple[int, int]:
    """(coordinate index, level) of a chart variable."""
    match = _CHART_VAR.match(name)
    if not match:
        raise PreconditionError(f"{name!r} is not a chart coordinate", parameter="variable")
    return int(match.group(1)), int(match.group(2) or 0)


def base_monomials(n: int, degree: int) -> List[Poly]:
    """Every monomial in z1..zn of total degree <= degree, lowest degree first."""
    coords = [chart_var(i) for i in range(1, n + 1)]
    result = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(coords, d):
            exponents: Dict[str, int] = {}
            for var in combo:
                exponents[var] = exponents.get(var, 0) + 1
            result.append(Poly.monomial(exponents))
    return result


def chart_level(g: ChartFunction) -> int:
    """Highest tower level among the variables of g."""
    return max((parse_chart_var(var)[1] for var in g.variables), default=0)


@dataclass(frozen=True)
class TowerChart:
    """Regular chart of height k over an n-dimensional base; mode away (sigma = 1) or adapted (sigma = z1)."""
    n: int
    k: int
    mode: str = AWAY

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"base dimension must be >= 1, got {self.n}", parameter="n")
        if self.k < 0:
            raise PreconditionError(f"tower height must be >= 0, got {self.k}", parameter="k")
        if self.mode not in MODES:
            raise PreconditionError(f"mode must be one of {MODES}, got {self.mode!r}", parameter="mode")

    @property
    def coordinates(self) -> Tuple[str, ...]:
        names = [chart_var(i) for i in range(1, self.n + 1)]
        for level in range(1, self.k + 1):
            names.extend(chart_var(i, level) for i in range(1, self.n))
        return tuple(names)

    @property
    def sigma(self) -> Poly:
        return Poly.var("z1") if self.mode == ADAPTED else Poly.one()


@dataclass(frozen=True)
class GammaParams:
    """Basepoint z in Q^n and jet parameters w[i][j-1] = w_i^(j) for i < n, 1 <= j <= k."""
    base: Tuple[Fraction, ...]
    w: Tuple[Tuple[Fraction, ...], ...]
    k: int

    def __post_init__(self):
        base = tuple(Fraction(v) for v in self.base)
        w = tuple(tuple(Fraction(v) for v in row) for row in self.w)
        if not base:
            raise PreconditionError("empty basepoint", parameter="base")
        if len(w) != len(base) - 1:
            raise PreconditionError(f"need {len(base) - 1} rows of jet parameters, got {len(w)}", parameter="w")
        if any(len(row) != self.k for row in w):
            raise PreconditionError(f"every jet-parameter row needs {self.k} entries", parameter="w")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return len(self.base)


def chart_point(params: GammaParams) -> Dict[str, Fraction]:
    """Chart coordinates of the point (w, z)."""
    point = {chart_var(i): value for i, value in enumerate(params.base, start=1)}
    for i, row in enumerate(params.w, start=1):
        for level, value in enumerate(row, start=1):
            point[chart_var(i, level)] = value
    return point


def xi_apply(p: int, g: ChartFunction, chart: TowerChart) -> ChartFunction:
    """xi_p = d/dz_n + sum_i z_i^(1) d/dz_i + ... + z_i^(p) d/dz_i^(p-1)."""
    if not 1 <= p <= chart.k:
        raise PreconditionError(f"xi_{p} is defined for 1 <= p <= {chart.k}", parameter="p")
    for var in g.variables:
        i, level = parse_chart_var(var)
        if i > chart.n:
            raise PreconditionError(f"{var} is not a coordinate of the chart", parameter="g")
        if level >= p:
            raise LevelViolation(f"xi_{p} applied to a function of {var}", level=level, variable=var)

    def rule(var: str) -> Poly:
        i, level = parse_chart_var(var)
        if i == chart.n:
            return Poly.one()
        return Poly.var(chart_var(i, level + 1))

    if isinstance(g, RatFunc):
        return g.apply_derivation(lambda poly: poly.derive(rule))
    return Poly.coerce(g).derive(rule)


def nabla_chart_sequence(j: int, f: Poly, chart: TowerChart) -> List[ChartFunction]:
    """[nabla_U^0 f, ..., nabla_U^j f]."""
    if not 0 <= j <= chart.k:
        raise PreconditionError(f"order must satisfy 0 <= j <= {chart.k}, got {j}", parameter="j")
    f = Poly.coerce(f)
    if chart_level(f):
        raise LevelViolation("nabla_U starts from a base function", level=chart_level(f))
    values: List[ChartFunction] = [f if chart.mode == AWAY else RatFunc(f)]
    z1 = Poly.var("z1")
    for level in range(1, j + 1):
        current = values[-1]
        moved = xi_apply(level, current, chart)
        if chart.mode == ADAPTED:
            moved = moved - current * RatFunc.quotient(xi_apply(level, z1, chart), z1)
        values.append(moved)
    return values


def nabla_chart(j: int, f: Poly, chart: TowerChart) -> ChartFunction:
    """nabla_U^j f: polynomial in away mode, rational in adapted mode."""
    return nabla_chart_sequence(j, f, chart)[j]


def gamma_curve(params: GammaParams, k: int) -> CurveJet:
    """k-jet of gamma_i(t) = z_i + sum_j w_i^(j) t^j / j!, gamma_n(t) = z_n + t."""
    if not 0 <= k <= params.k:
        raise PreconditionError(f"curve order {k} exceeds parameter order {params.k}", parameter="k")
    derivs = {}
    for i, row in enumerate(params.w, start=1):
        derivs[chart_var(i)] = (params.base[i - 1],) + row[:k]
    last = (params.base[-1],) + ((Fraction(1),) + (Fraction(0),) * (k - 1) if k else ())
    derivs[chart_var(params.n)] = last
    return CurveJet(k, derivs)


class ChartIdentity:
    """
    Both sides of d^j f (j_k gamma) = nabla_U^j f (w, z) for j = 0..order.

    The symbolic sides are built once and evaluated for each parameter draw.
    In adapted mode the jet side is the log connection with sigma = z1, and
    the identity holds wherever the basepoint has z1 != 0.
    """

    def __init__(self, f: Poly, chart: TowerChart, order: Optional[int] = None):
        order = chart.k if order is None else order
        f = Poly.coerce(f)
        self.chart = chart
        self.order = order
        self.chart_side = nabla_chart_sequence(order, f, chart)
        if chart.mode == AWAY:
            derived = [f]
            for _ in range(order):
                derived.append(jet_derivation(derived[-1]))
            self.jet_side = [JetPoly(value, j) for j, value in enumerate(derived)]
        else:
            sigma = chart.sigma
            self.jet_side = [
                JetPoly(RatFunc(numerator, {sigma: j}), j)
                for j, numerator in enumerate(nabla_numerators(order, f, sigma))
            ]

    def defects(self, params: GammaParams) -> List[Fraction]:
        """Jet side minus chart side at (w, z), one entry per order."""
        if params.n != self.chart.n or params.k < self.order:
            raise PreconditionError(
                f"parameters for n={params.n}, k={params.k} do not fit the chart n={self.chart.n}, order {self.order}",
                parameter="params",
            )
        curve = gamma_curve(params, params.k)
        point = chart_point(params)
        return [pullback_curve(lhs, curve) - rhs.evaluate(point) for lhs, rhs in zip(self.jet_side, self.chart_side)]


def verify_chart_identity(f: Poly, j: int, params: GammaParams, chart: TowerChart = None) -> Fraction:
    """d^j f (j_k gamma) - nabla_U^j f (w, z), away from the divisor."""
    chart = chart or TowerChart(params.n, params.k, AWAY)
    if chart.mode != AWAY:
        raise PreconditionError("the chart identity is asserted away from the divisor", parameter="chart")
    return ChartIdentity(f, chart, j).defects(params)[j]


def omega_chart(sections: Sequence[Poly], chart: TowerChart) -> ChartFunction:
    """det(nabla_U^j s_i), 1 <= i, j <= k."""
    sections = [Poly.coerce(s) for s in sections]
    if len(sections) != chart.k:
        raise PreconditionError(f"omega needs k = {chart.k} sections, got {len(sections)}", parameter="sections")
    columns = [nabla_chart_sequence(chart.k, s, chart)[1:] for s in sections]
    matrix = [[columns[i][j] for i in range(chart.k)] for j in range(chart.k)]
    logger.debug(f"🧮 omega_U of {chart.k} sections in {chart.mode} mode")
    return determinant(matrix)


def gamma_weights(k: int) -> Tuple[int, ...]:
    """Coefficients (k, k + (k-1), ..., k + ... + 2) attached to Gamma_2..Gamma_k."""
    if k < 2:
        raise PreconditionError(f"gamma weights need k >= 2, got {k}", parameter="k")
    weights, total = [], 0
    for step in range(k, 1, -1):
        total += step
        weights.append(total)
    return tuple(weights)
