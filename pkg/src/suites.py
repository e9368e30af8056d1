"""
LogJet - Verification Suites
Seeded randomized suites checking every exact identity of the library.

Each suite returns one CheckResult per identity. The same
seed and size always produce the same instances and the same report.
"""

import logging
import random
import time
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

from .exceptions import InternalMismatch, LogJetError, NotDivisible, PoleAtBasepoint, SingularFrame
from .fermat import (
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
from .jetalg import (
    CurveJet,
    JetPoly,
    Reparam,
    invariance_defect,
    jet_of_poly_curve,
    jet_var,
    pullback_curve,
    pullback_symbolic,
    reparametrize,
    rescale,
    total_derive,
)
from .logconn import (
    ABS_FROM_LOG,
    LOG_FROM_ABS,
    LogPair,
    leibniz_defect,
    log_basis_poly,
    log_derivatives,
    nabla,
    nabla_numerators,
    non_log_defect,
    sharp_pole_defects,
    wronskian_abs,
    wronskian_log,
)
from .models import CheckResult, FermatFamily, VerifyReport
from .multipoly import Poly, determinant
from .tower import (
    ADAPTED,
    AWAY,
    MODES,
    ChartIdentity,
    GammaParams,
    TowerChart,
    base_monomials,
    chart_level,
    chart_point,
    gamma_curve,
    nabla_chart,
    omega_chart,
)

logger = logging.getLogger(__name__)

SUITES = ("jetalg", "logconn", "tower", "fermat")
FAULTS = ("nabla", "graph")
GRID_DEGREE = 3


class SuiteSize(NamedTuple):
    instances: int      # random instances per identity
    max_k: int
    max_n: int
    max_degree: int
    families: int       # random Fermat families
    family_k: int
    family_r: int
    grid_draws: int     # parameter draws per monomial in the chart grid


SIZES: Dict[str, SuiteSize] = {
    "small": SuiteSize(instances=12, max_k=3, max_n=2, max_degree=3, families=4, family_k=2, family_r=3, grid_draws=2),
    "medium": SuiteSize(instances=200, max_k=4, max_n=3, max_degree=4, families=50, family_k=3, family_r=4, grid_draws=50),
}


# =============================================================================
# RANDOM INSTANCES
# =============================================================================

class InstanceFactory:
    """Random exact objects drawn from one seeded generator."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def coeff(self, spread: int = 3) -> Fraction:
        value = 0
        while not value:
            value = self.rng.randint(-spread, spread)
        return Fraction(value, self.rng.choice((1, 1, 1, 2, 3)))

    def poly(self, variables: Sequence[str], degree: int, terms: int = 3) -> Poly:
        result = Poly.zero()
        for _ in range(terms):
            exponents: Dict[str, int] = {}
            for _ in range(self.rng.randint(0, degree)):
                var = self.rng.choice(variables)
                exponents[var] = exponents.get(var, 0) + 1
            result = result + Poly.monomial(exponents, self.coeff())
        return result

    def nonconstant_poly(self, variables: Sequence[str], degree: int, terms: int = 3) -> Poly:
        result = self.poly(variables, max(degree, 1), terms)
        while result.is_constant():
            result = result + Poly.var(self.rng.choice(variables)).scale(self.coeff())
        return result

    def jet_poly(self, coords: Sequence[str], order: int, degree: int, terms: int = 3) -> Poly:
        variables = list(coords) + [jet_var(c, j) for c in coords for j in range(1, order + 1)]
        return self.poly(variables, degree, terms)

    def isobaric(self, coords: Sequence[str], weight: int, terms: int = 3) -> Poly:
        """Sum of jet monomials of the given weight with polynomial base coefficients."""
        result = Poly.zero()
        for _ in range(terms):
            exponents: Dict[str, int] = {}
            remaining = weight
            while remaining:
                j = self.rng.randint(1, remaining)
                var = jet_var(self.rng.choice(coords), j)
                exponents[var] = exponents.get(var, 0) + 1
                remaining -= j
            base = self.poly(coords, 1, 2)
            result = result + base * Poly.monomial(exponents)
        return result

    def curve(self, coords: Sequence[str], degree: int) -> Dict[str, Poly]:
        t = Poly.var("t")
        return {
            coord: sum((t ** e).scale(self.rng.randint(-3, 3)) for e in range(degree + 1)) + t.scale(self.rng.randint(0, 1))
            for coord in coords
        }

    def curve_jet(self, coords: Sequence[str], k: int) -> CurveJet:
        return CurveJet(k, {coord: tuple(self.coeff() for _ in range(k + 1)) for coord in coords})

    def reparam(self, k: int) -> Reparam:
        return Reparam(tuple(self.coeff() if j == 0 else Fraction(self.rng.randint(-2, 2)) for j in range(k)))

    def gamma_params(self, n: int, k: int) -> GammaParams:
        return GammaParams(
            base=tuple(self.coeff() for _ in range(n)),
            w=tuple(tuple(Fraction(self.rng.randint(-3, 3)) for _ in range(k)) for _ in range(n - 1)),
            k=k,
        )

    def family(self, size: SuiteSize) -> FermatFamily:
        n = self.rng.randint(1, min(2, size.max_n))
        delta = self.rng.randint(1, 2)
        k = self.rng.randint(1, size.family_k)
        r = self.rng.randint(1, size.family_r)
        epsilon = self.rng.randint(k, 3) if k <= 3 else k
        coords = [f"z{i}" for i in range(1, n + 1)]
        tau = (Poly.one(),) + tuple(Poly.var(c) for c in coords)
        probe = FermatFamily(n=n, N=n, delta=delta, epsilon=epsilon, r=r, k=k, tau=tau, a={})
        a = {}
        for index in probe.index_set():
            if self.rng.random() < 0.8:
                poly = self.poly(coords, epsilon, 2)
                if not poly.is_zero():
                    a[index] = poly
        if not a:
            a[probe.index_set()[0]] = Poly.one()
        return FermatFamily(n=n, N=n, delta=delta, epsilon=epsilon, r=r, k=k, tau=tau, a=a)


def _coords(n: int) -> List[str]:
    return [f"z{i}" for i in range(1, n + 1)]


def _run(check: CheckResult, label: str, test: Callable[[], bool]) -> None:
    started = time.perf_counter()
    try:
        check.record(test(), label)
    except (PoleAtBasepoint, SingularFrame):
        check.skipped += 1
    except LogJetError as exc:
        check.record(False, f"{label}: {exc}")
    finally:
        check.seconds += time.perf_counter() - started


def pulled_log_wronskian(sections: Sequence[Poly], sigma: Poly, jet: CurveJet) -> Fraction:
    """W_D(s_1..s_k) at j_k f, as the determinant of the pulled-back nabla^j s_i."""
    k = len(sections)
    sigma_value = pullback_curve(JetPoly(sigma), jet)
    if not sigma_value:
        raise PoleAtBasepoint("sigma vanishes at the basepoint", point={c: str(v) for c, v in jet.basepoint.items()})
    columns = [
        [pullback_curve(JetPoly(N, j), jet) / sigma_value ** j for j, N in enumerate(nabla_numerators(k, s, sigma)[1:], start=1)]
        for s in sections
    ]
    return determinant([[columns[i][j] for i in range(k)] for j in range(k)])


def _numerators(k: int, s: Poly, sigma: Poly, fault: Optional[str]) -> List[Poly]:
    numerators = nabla_numerators(k, s, sigma)
    if fault == "nabla":
        # negative control: add sigma^j * D1z1 to every derived term
        marker = Poly.var(jet_var("z1", 1))
        numerators = [numerators[0]] + [N + sigma ** j * marker for j, N in enumerate(numerators[1:], start=1)]
    return numerators


# =============================================================================
# SUITES
# =============================================================================

def jetalg_suite(seed: int, size: SuiteSize, fault: Optional[str] = None) -> List[CheckResult]:
    factory = InstanceFactory(seed)
    rng = factory.rng
    derivation = CheckResult(name="jetalg.derivation_law")
    weights = CheckResult(name="jetalg.weight_shift")
    compatibility = CheckResult(name="jetalg.pullback_compatibility")
    equivariance = CheckResult(name="jetalg.rescale_equivariance")
    right_action = CheckResult(name="jetalg.reparametrize_right_action")
    negative = CheckResult(name="jetalg.invariance_negative_control")

    for case in range(size.instances):
        n = rng.randint(1, size.max_n)
        coords = _coords(n)
        k = rng.randint(1, size.max_k)
        label = f"case {case} n={n} k={k}"

        P = JetPoly(factory.jet_poly(coords, k - 1, size.max_degree))
        Q = JetPoly(factory.jet_poly(coords, k - 1, size.max_degree))
        _run(derivation, label, lambda: total_derive(P * Q) == total_derive(P) * Q + P * total_derive(Q))

        m = rng.randint(1, 4)
        iso = JetPoly(factory.isobaric(coords, m))
        _run(weights, label, lambda: iso.is_zero() or total_derive(iso).is_zero()
             or str(total_derive(iso).weight()) == f"isobaric({m + 1})")

        curve = factory.curve(coords, rng.randint(1, 3))
        def compatible() -> bool:
            lhs = pullback_curve(total_derive(P), jet_of_poly_curve(curve, P.order + 1))
            along = pullback_symbolic(P, curve).as_poly()
            return lhs == along.partial_derivative("t").evaluate({"t": 0})
        _run(compatibility, label, compatible)

        jet = factory.curve_jet(coords, max(m, 1))
        lam = factory.coeff()
        _run(equivariance, label, lambda: pullback_curve(iso, rescale(jet, lam)) == lam ** m * pullback_curve(iso, jet))

        phi, psi = factory.reparam(k), factory.reparam(k)
        f = factory.curve_jet(coords, k)
        _run(right_action, label, lambda: reparametrize(reparametrize(f, phi), psi) == reparametrize(f, phi.compose(psi)))

    second = JetPoly(Poly.var(jet_var("z1", 2)))
    samples = [(jet_of_poly_curve([Poly.var("t")], 2), Reparam((1, 1)))]
    _run(negative, "D2z1", lambda: any(invariance_defect(second, 2, samples)))
    return [derivation, weights, compatibility, equivariance, right_action, negative]


def logconn_suite(seed: int, size: SuiteSize, fault: Optional[str] = None) -> List[CheckResult]:
    factory = InstanceFactory(seed)
    rng = factory.rng
    vanishing = CheckResult(name="logconn.nabla_sigma_vanishes")
    agreement = CheckResult(name="logconn.nabla_closed_form")
    leibniz = CheckResult(name="logconn.leibniz")
    poles = CheckResult(name="logconn.sharp_pole_order")
    lemma = CheckResult(name="logconn.non_log_lemma")
    alternating = CheckResult(name="logconn.wronskian_alternating")
    covariance = CheckResult(name="logconn.wronskian_covariance")
    k_jets = CheckResult(name="logconn.k_jet_dependence")
    inverse = CheckResult(name="logconn.basis_inverse")
    oracle = CheckResult(name="logconn.basis_series_oracle")

    for case in range(size.instances):
        n = rng.randint(1, size.max_n)
        coords = _coords(n)
        k = rng.randint(1, size.max_k)
        sigma = factory.nonconstant_poly(coords, min(size.max_degree, 3))
        pair = LogPair(tuple(coords), sigma)
        s = factory.poly(coords, size.max_degree)
        label = f"case {case} n={n} k={k} sigma={sigma}"

        _run(vanishing, label, lambda: _numerators(k, sigma, sigma, fault)[k].is_zero())

        def closed_form() -> bool:
            if fault == "nabla":
                corrupted = _numerators(k, s, sigma, fault)[k]
                return corrupted == nabla(k, s, pair).numerator
            try:
                nabla(k, s, pair, cross_check=True)
            except InternalMismatch:
                return False
            return True
        _run(agreement, label, closed_form)

        _run(leibniz, label, lambda: leibniz_defect(k, s, sigma, _numerators(k, s, sigma, fault)).is_zero())

        z1_pair = LogPair(tuple(coords), Poly.var("z1"))
        _run(poles, label, lambda: not sharp_pole_defects(nabla(k, s, z1_pair, cross_check=False)))

        kw = rng.randint(1, min(size.max_k, 3))
        sections = [factory.poly(coords, 3) for _ in range(kw)]
        _run(lemma, label, lambda: non_log_defect(sections, pair).is_zero())

        if kw >= 2:
            swapped = [sections[1], sections[0]] + sections[2:]
            repeated = [sections[0], sections[0]] + sections[2:]
            _run(alternating, label, lambda: wronskian_abs(swapped) == -wronskian_abs(sections)
                 and wronskian_log(repeated, pair).is_zero())

        w_abs = wronskian_abs(sections)
        weight = (kw - 1) * kw // 2
        jet = factory.curve_jet(coords, kw - 1)
        phi = factory.reparam(kw - 1) if kw > 1 else Reparam((factory.coeff(),))
        _run(covariance, label, lambda: not any(invariance_defect(w_abs, weight, [(jet, phi)])))

        def k_jet_dependence() -> bool:
            order = len(sections)
            jet_k = factory.curve_jet(coords, order)
            base = jet_k.basepoint
            h = (Poly.var("z1") - base["z1"]) ** (order + 1) * factory.poly(coords, 1)
            moved = [sections[0] + h] + sections[1:]
            return pulled_log_wronskian(moved, sigma, jet_k) == pulled_log_wronskian(sections, sigma, jet_k)
        _run(k_jets, label, k_jet_dependence)

        values = [factory.coeff() for _ in range(6)]
        def series_oracle() -> bool:
            logs = log_derivatives(values)
            point = {f"L{i}": value for i, value in enumerate(logs, start=1)}
            return all(
                log_basis_poly(j, ABS_FROM_LOG).evaluate(point) == values[j] / values[0]
                for j in range(1, len(values))
            )
        _run(oracle, label, series_oracle)

    for j in range(1, 6):
        images = {f"u{i}": log_basis_poly(i, ABS_FROM_LOG) for i in range(1, j + 1)}
        _run(inverse, f"j={j}", lambda: log_basis_poly(j, LOG_FROM_ABS).compose(images) == Poly.var(f"L{j}"))
    return [vanishing, agreement, leibniz, poles, lemma, alternating, covariance, k_jets, inverse, oracle]


def _chart_grid(factory: InstanceFactory, size: SuiteSize, mode: str, check: CheckResult) -> None:
    """Every base monomial of degree <= GRID_DEGREE, for all n, k in range and every order j <= k."""
    for n in range(1, size.max_n + 1):
        for k in range(1, size.max_k + 1):
            chart = TowerChart(n, k, mode)
            for f in base_monomials(n, GRID_DEGREE):
                sides = ChartIdentity(f, chart)
                for draw in range(size.grid_draws):
                    params = factory.gamma_params(n, k)
                    label = f"{mode} n={n} k={k} f={f} draw {draw}"
                    _run(check, label, lambda: not any(sides.defects(params)))


def tower_suite(seed: int, size: SuiteSize, fault: Optional[str] = None) -> List[CheckResult]:
    factory = InstanceFactory(seed)
    rng = factory.rng
    grids = {mode: CheckResult(name=f"tower.chart_identity_{mode}") for mode in MODES}
    levels = CheckResult(name="tower.level_discipline")
    omega = CheckResult(name="tower.omega_pullback")
    alternating = CheckResult(name="tower.omega_alternating")

    for mode in MODES:
        _chart_grid(factory, size, mode, grids[mode])

    for case in range(size.instances):
        n = rng.randint(1, size.max_n)
        k = rng.randint(1, size.max_k)
        coords = _coords(n)
        chart = TowerChart(n, k)
        params = factory.gamma_params(n, k)
        exponents = {c: rng.randint(0, 1) for c in coords}
        exponents[rng.choice(coords)] += rng.randint(0, 2)
        f = Poly.monomial(exponents)
        j = rng.randint(0, k)
        label = f"case {case} n={n} k={k} j={j} f={f}"

        _run(levels, label, lambda: chart_level(nabla_chart(j, f, chart)) <= j)

        sections = [factory.poly(coords, 2) for _ in range(k)]
        def pullback_matches() -> bool:
            w_d = wronskian_log(sections, LogPair(tuple(coords), Poly.one())).as_jetpoly()
            value = pullback_curve(w_d, gamma_curve(params, k))
            return value == Poly.coerce(omega_chart(sections, chart)).evaluate(chart_point(params))
        _run(omega, label, pullback_matches)

        if k >= 2:
            swapped = [sections[1], sections[0]] + sections[2:]
            _run(alternating, label, lambda: omega_chart(swapped, chart) == -omega_chart(sections, chart))
    return [grids[AWAY], grids[ADAPTED], levels, omega, alternating]


def fermat_suite(seed: int, size: SuiteSize, fault: Optional[str] = None) -> List[CheckResult]:
    factory = InstanceFactory(seed)
    rng = factory.rng
    factor = CheckResult(name="fermat.factorization")
    system = CheckResult(name="fermat.system_residual")
    decomposition = CheckResult(name="fermat.system_decomposition")
    plucker = CheckResult(name="fermat.plucker_factorization")
    cramer = CheckResult(name="fermat.cramer_identity")
    rank = CheckResult(name="fermat.rank")

    for case in range(size.families):
        fam = factory.family(size)
        chart = TotalChart.for_family(fam)
        label = f"family {case} n={fam.n} delta={fam.delta} r={fam.r} k={fam.k} eps={fam.epsilon}"

        def factorizes() -> bool:
            try:
                return not factorization_defects(fam, chart)
            except NotDivisible:
                return False
        _run(factor, label, factorizes)

        perturbation = Poly.var("z1") if fault == "graph" else None
        for j in range(1, fam.k + 1):
            _run(system, f"{label} j={j}", lambda: system_residual(fam, j, chart, perturbation).is_zero())
            _run(decomposition, f"{label} j={j}", lambda: system_decomposition_defect(fam, j, chart).is_zero())

        indices = fam.index_set()
        if len(indices) >= fam.k:
            chosen = sorted(rng.sample(indices, fam.k), reverse=True)
            _run(plucker, label, lambda: plucker_factorization_defect(chosen, fam, chart).is_zero())
            if fam.k >= 2:
                swapped = [chosen[1], chosen[0]] + chosen[2:]
                _run(plucker, f"{label} swap", lambda: plucker_omega(swapped, fam, chart) == -plucker_omega(chosen, fam, chart))
            _run(cramer, label, lambda: cramer_identity_check(default_frame(fam), chosen, fam, chart).is_zero())

        if fam.epsilon >= fam.k and fam.k <= 2:
            _run(rank, label, lambda: rank_probe(fam, chart) == expected_rank(fam, default_point(fam)))
    return [factor, system, decomposition, plucker, cramer, rank]


SUITE_RUNNERS = {
    "jetalg": jetalg_suite,
    "logconn": logconn_suite,
    "tower": tower_suite,
    "fermat": fermat_suite,
}


def run_verify(suite: str = "all", seed: int = 1, size: str = "small", fault: Optional[str] = None) -> VerifyReport:
    """Run one suite or all of them; suites run in a fixed order."""
    if suite != "all" and suite not in SUITE_RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    if size not in SIZES:
        raise ValueError(f"unknown size {size!r}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    names = SUITES if suite == "all" else (suite,)
    report = VerifyReport(suite=suite, seed=seed, size=size)
    for offset, name in enumerate(names):
        logger.info(f"🔬 Running {name} suite", extra={"suite": name, "seed": seed})
        checks = SUITE_RUNNERS[name](seed + offset, SIZES[size], fault)
        for check in checks:
            if check.failed:
                logger.warning(f"❌ {check.name}: {check.failed} failures", extra={"suite": name, "check": check.name})
        report.checks.extend(checks)
    logger.info(f"{'✅' if report.success else '❌'} {report.total_instances} instances checked")
    return report
