"""
LogJet - Effective Degree Bounds
Exact big-integer arithmetic for the degree bounds, the degree decomposition
m = epsilon + (r + k) delta, dimension-count audits and the orbifold
ceiling inequality.
"""

import logging
from fractions import Fraction
from math import ceil, comb
from typing import Iterator, Sequence, Tuple

import mpmath

from .exceptions import PreconditionError, TooSmall
from .models import BoundParams, BoundReport, BoundRow, Decomposition, DimensionAudit

logger = logging.getLogger(__name__)

KOBAYASHI = "kobayashi"
SMT = "smt"
MODES = (KOBAYASHI, SMT)


def _check_n(n: int) -> None:
    if n < 2:
        raise PreconditionError(f"bounds need n >= 2, got {n}", parameter="n")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got {mode!r}", parameter="mode")


def params_for(n: int) -> BoundParams:
    """Canonical k = n + 1, delta = n^2 + 3n + 1, k' = k(k+1)/2 and N = k."""
    _check_n(n)
    k = n + 1
    return BoundParams(n=n, k=k, delta=n * n + 3 * n + 1, k_prime=k * (k + 1) // 2, N_param=k)


def kobayashi_bound(n: int) -> int:
    """(n+2)^(n+3) (n+1)^(n+3)."""
    _check_n(n)
    return (n + 2) ** (n + 3) * (n + 1) ** (n + 3)


def corollary_bound(n: int) -> int:
    """(n^2 + 3n + 1)^(n+3)."""
    _check_n(n)
    return (n * n + 3 * n + 1) ** (n + 3)


def basic_inequality(n: int) -> bool:
    """k(k + delta - 1 + k delta) < (delta + 1)^2."""
    p = params_for(n)
    return p.k * (p.k + p.delta - 1 + p.k * p.delta) < (p.delta + 1) ** 2


def r0(n: int, mode: str = KOBAYASHI) -> Fraction:
    """delta^(k-1) (delta+1)^2, or delta^(k-1) (delta+1)(delta+3/2) in smt mode."""
    _check_mode(mode)
    p = params_for(n)
    base = p.delta ** (p.k - 1) * (p.delta + 1)
    if mode == KOBAYASHI:
        return Fraction(base * (p.delta + 1))
    return base * (p.delta + Fraction(3, 2))


def threshold(n: int, mode: str = KOBAYASHI) -> int:
    """ceil((r0 + k) delta + 2 delta): every m at or above decomposes."""
    p = params_for(n)
    return ceil((r0(n, mode) + p.k) * p.delta + 2 * p.delta)


def r_lower(n: int, epsilon: int, mode: str = KOBAYASHI) -> int:
    """The value r has to exceed for a given epsilon."""
    _check_mode(mode)
    p = params_for(n)
    lower = p.delta ** (p.k - 1) * p.k * (epsilon + p.k * p.delta)
    if mode == SMT:
        lower += p.delta ** (p.k - 1) * p.k_prime
    return lower


def decompose_degree(m: int, n: int, mode: str = KOBAYASHI) -> Decomposition:
    """Find epsilon in [k, k + delta - 1] and r with m = epsilon + (r + k) delta and r above its bound."""
    _check_mode(mode)
    p = params_for(n)
    for epsilon in range(p.k, p.k + p.delta):
        if (m - epsilon) % p.delta:
            continue
        r = (m - epsilon) // p.delta - p.k
        lower = r_lower(n, epsilon, mode)
        if r >= 1 and r > lower:
            BoundParams(**p.model_dump(exclude={"epsilon", "r", "m"}), epsilon=epsilon, r=r, m=m)
            return Decomposition(n=n, m=m, mode=mode, epsilon=epsilon, r=r, r_lower=lower)
        raise TooSmall(f"r = {r} does not exceed {lower}", m=m, n=n, mode=mode)
    raise TooSmall("no admissible epsilon", m=m, n=n, mode=mode)


def smt_ratio(n: int, m: int) -> Fraction:
    """delta^(k-1) k' / (r - delta^(k-1) k (epsilon + k delta)) for the smt decomposition of m."""
    p = params_for(n)
    decomposition = decompose_degree(m, n, SMT)
    return Fraction(
        p.delta ** (p.k - 1) * p.k_prime,
        decomposition.r - r_lower(n, decomposition.epsilon, KOBAYASHI),
    )


def dimension_audit(n: int) -> DimensionAudit:
    """Dimension counts with N = k = n + 1."""
    p = params_for(n)
    lifted = (p.k + 1) * n + 1
    return DimensionAudit(
        n=n,
        k=p.k,
        delta=p.delta,
        N_param=p.N_param,
        lifted_dimension=lifted,
        delta_plus_one=p.delta + 1,
        exceptional_margin=lifted - (p.delta + 1),
        regular_margin=lifted + (p.k - 1) - (p.delta + 1),
        index_count_lower=comb(p.N_param - n + p.delta, p.delta),
    )


# =============================================================================
# ORBIFOLD CEILING
# =============================================================================

def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_weighted_indices(k: int, n: int, N: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """All (alpha_1, ..., alpha_k), alpha_j in N^n, with |alpha_1| + 2|alpha_2| + ... + k|alpha_k| = N."""
    if k < 1 or n < 1 or N < 0:
        raise PreconditionError("need k, n >= 1 and N >= 0", parameter="k")

    def build(j: int, remaining: int):
        if j == 0:
            if remaining == 0:
                yield ()
            return
        for size in range(remaining // j, -1, -1):
            for alpha_j in _compositions(size, n):
                for rest in build(j - 1, remaining - j * size):
                    yield rest + (alpha_j,)

    yield from build(k, N)


def orbifold_ceiling_check(alpha: Sequence[Sequence[int]], m: int, order_factor: bool = False) -> bool:
    """
    ceil(sum_j alpha_j^1 min(j, m) / m) <= ceil(N / m), N = sum_j j |alpha_j|.

    order_factor=True multiplies the j-th summand by j; that reading fails
    already for alpha = ((0,), (1,)), m = 2.
    """
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}", parameter="m")
    weight = sum(j * sum(alpha_j) for j, alpha_j in enumerate(alpha, start=1))
    lhs = sum(
        (j if order_factor else 1) * alpha_j[0] * min(j, m)
        for j, alpha_j in enumerate(alpha, start=1) if alpha_j
    )
    return -(-lhs // m) <= -(-weight // m)


# =============================================================================
# TABLES
# =============================================================================

def asymptotic_ratio(n: int) -> str:
    """bound(n) / (e^3 n^(2n+6)) as a decimal string; informational only."""
    with mpmath.workdps(30):
        ratio = mpmath.mpf(kobayashi_bound(n)) / (mpmath.e ** 3 * mpmath.mpf(n) ** (2 * n + 6))
        return mpmath.nstr(ratio, 10)


def bound_row(n: int) -> BoundRow:
    p = params_for(n)
    bound = kobayashi_bound(n)
    alternative = corollary_bound(n)
    threshold_k = threshold(n, KOBAYASHI)
    threshold_s = threshold(n, SMT)
    ratio = smt_ratio(n, bound)
    return BoundRow(
        n=n,
        k=p.k,
        delta=p.delta,
        k_prime=p.k_prime,
        kobayashi_bound=bound,
        corollary_bound=alternative,
        larger_headline="main" if bound >= alternative else "corollary",
        threshold_kobayashi=threshold_k,
        threshold_smt=threshold_s,
        basic_inequality=basic_inequality(n),
        headline_base_comparison=p.delta < (n + 1) * (n + 2),
        kobayashi_threshold_below_bound=threshold_k < bound,
        smt_threshold_below_bound=threshold_s < bound,
        smt_ratio=ratio,
        smt_ratio_below_one=ratio < 1,
        dimension=dimension_audit(n),
        asymptotic_ratio=asymptotic_ratio(n),
    )


def bounds_table(n_from: int, n_to: int) -> BoundReport:
    if n_from < 2 or n_to < n_from:
        raise PreconditionError(f"need 2 <= n_from <= n_to, got {n_from}..{n_to}", parameter="n_range")
    logger.info(f"📊 Computing bounds for n = {n_from}..{n_to}")
    return BoundReport(rows=[bound_row(n) for n in range(n_from, n_to + 1)])
