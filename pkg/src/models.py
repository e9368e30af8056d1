"""
LogJet - Pydantic Models
Records for Fermat families, bound parameters, bound tables and verification reports.
"""

import json
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_serializer,
    field_validator,
    model_validator,
)

from .multipoly import Poly


def _int_text(value: int) -> str:
    return str(value)


def _frac_text(value: Fraction) -> str:
    return str(value)


# =============================================================================
# FERMAT FAMILY
# =============================================================================

class FermatFamily(BaseModel):
    """
    A Fermat-type family sigma(a) = sum_I a_I tau^{(r+k)I} in one affine chart.

    Keys of `a` are exponent vectors I = (i_0, ..., i_N) with |I| = delta.
    Indices missing from `a` have a_I = 0.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(ge=1)
    N: int = Field(ge=1)
    delta: int = Field(ge=1)
    epsilon: int = Field(ge=0)
    r: int = Field(ge=1)
    k: int = Field(ge=1)
    tau: Tuple[Poly, ...]
    a: Dict[Tuple[int, ...], Poly]
    frame: Optional[Tuple[Poly, ...]] = None
    point: Optional[Tuple[Fraction, ...]] = None

    @field_validator("a")
    @classmethod
    def check_index_shape(cls, v):
        """Exponent vectors must be non-negative."""
        for index in v:
            if any(part < 0 for part in index):
                raise ValueError(f"negative entry in index {index}")
        return v

    @model_validator(mode="after")
    def check_family(self) -> "FermatFamily":
        if self.N < self.n:
            raise ValueError(f"N = {self.N} must be at least n = {self.n}")
        if len(self.tau) != self.N + 1:
            raise ValueError(f"expected {self.N + 1} tau sections, got {len(self.tau)}")
        allowed = set(self.coordinates)
        for index, coeff in self.a.items():
            if len(index) != self.N + 1:
                raise ValueError(f"index {index} must have {self.N + 1} entries")
            if sum(index) != self.delta:
                raise ValueError(f"index {index} has |I| = {sum(index)}, expected delta = {self.delta}")
            if coeff.degree > self.epsilon:
                raise ValueError(f"a{list(index)} has degree {coeff.degree} > epsilon = {self.epsilon}")
        polys = list(self.tau) + list(self.a.values()) + list(self.frame or ())
        for poly in polys:
            stray = set(poly.variables) - allowed
            if stray:
                raise ValueError(f"unexpected variables {sorted(stray)}; allowed {sorted(allowed)}")
        if self.frame is not None and len(self.frame) != self.k:
            raise ValueError(f"frame needs k = {self.k} sections, got {len(self.frame)}")
        if self.point is not None and len(self.point) != self.n:
            raise ValueError(f"point needs n = {self.n} coordinates, got {len(self.point)}")
        return self

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return tuple(f"z{i}" for i in range(1, self.n + 1))

    def index_set(self) -> List[Tuple[int, ...]]:
        """All I with |I| = delta, in decreasing lexicographic order."""
        indices = []
        for combo in combinations_with_replacement(range(self.N + 1), self.delta):
            index = [0] * (self.N + 1)
            for slot in combo:
                index[slot] += 1
            indices.append(tuple(index))
        return sorted(set(indices), reverse=True)

    def coefficient(self, index: Tuple[int, ...]) -> Poly:
        return self.a.get(tuple(index), Poly.zero())

    def to_canonical_text(self) -> str:
        """Echo the family in the family-file format, keys in a fixed order."""
        lines = [
            f"n = {self.n}",
            f"N = {self.N}",
            f"delta = {self.delta}",
            f"epsilon = {self.epsilon}",
            f"r = {self.r}",
            f"k = {self.k}",
            "tau = " + ", ".join(str(p) for p in self.tau),
        ]
        for index in sorted(self.a, reverse=True):
            if not self.a[index].is_zero():
                lines.append(f"a[{','.join(str(i) for i in index)}] = {self.a[index]}")
        if self.frame is not None:
            lines.append("frame = " + ", ".join(str(p) for p in self.frame))
        if self.point is not None:
            lines.append("point = " + ", ".join(str(c) for c in self.point))
        return "\n".join(lines) + "\n"


# =============================================================================
# BOUND RECORDS
# =============================================================================

class BoundParams(BaseModel):
    """Parameter record (n, k, delta, epsilon, r, m, N) feeding the degree bounds."""
    n: int = Field(ge=2)
    k: int
    delta: int
    k_prime: int
    N_param: int
    epsilon: Optional[int] = None
    r: Optional[int] = None
    m: Optional[int] = None

    @model_validator(mode="after")
    def check_canonical(self) -> "BoundParams":
        if self.k != self.n + 1:
            raise ValueError(f"k must be n + 1 = {self.n + 1}")
        if self.delta != self.n * self.n + 3 * self.n + 1:
            raise ValueError("delta must be n^2 + 3n + 1")
        if self.k_prime != self.k * (self.k + 1) // 2:
            raise ValueError("k' must be k(k+1)/2")
        if self.epsilon is not None:
            if not self.k <= self.epsilon <= self.k + self.delta - 1:
                raise ValueError(f"epsilon {self.epsilon} outside [k, k + delta - 1]")
            if self.r is not None and self.m is not None:
                if self.m != self.epsilon + (self.r + self.k) * self.delta:
                    raise ValueError("m must equal epsilon + (r + k) delta")
        return self

    @field_serializer("n", "k", "delta", "k_prime", "N_param", "epsilon", "r", "m", when_used="json")
    def serialize_ints(self, value: Optional[int]):
        return None if value is None else _int_text(value)


class Decomposition(BaseModel):
    """m = epsilon + (r + k) delta with the r-inequality of the chosen mode."""
    n: int
    m: int
    mode: str
    epsilon: int
    r: int
    r_lower: int                   # r must exceed this value

    @computed_field
    @property
    def slack(self) -> int:
        return self.r - self.r_lower

    @field_serializer("n", "m", "epsilon", "r", "r_lower", when_used="json")
    def serialize_ints(self, value: int) -> str:
        return _int_text(value)


class DimensionAudit(BaseModel):
    """Dimension-count inequalities behind the generic regularity and exceptional-locus arguments."""
    n: int
    k: int
    delta: int
    N_param: int
    lifted_dimension: int          # (k+1)n + 1
    delta_plus_one: int
    exceptional_margin: int        # (k+1)n + 1 - (delta + 1)
    regular_margin: int            # (k+1)n + 1 + (k-1) - (delta + 1)
    index_count_lower: int         # binom(N - n + delta, delta)

    @computed_field
    @property
    def exceptional_ok(self) -> bool:
        return self.exceptional_margin < 0

    @computed_field
    @property
    def regular_ok(self) -> bool:
        return self.regular_margin < 0

    @computed_field
    @property
    def index_count_ok(self) -> bool:
        return self.index_count_lower >= self.delta_plus_one

    @field_serializer(
        "n", "k", "delta", "N_param", "lifted_dimension", "delta_plus_one",
        "exceptional_margin", "regular_margin", "index_count_lower", when_used="json",
    )
    def serialize_ints(self, value: int) -> str:
        return _int_text(value)


class BoundRow(BaseModel):
    """One row of the bounds table."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    k: int
    delta: int
    k_prime: int
    kobayashi_bound: int
    corollary_bound: int
    larger_headline: str
    threshold_kobayashi: int
    threshold_smt: int
    basic_inequality: bool
    headline_base_comparison: bool
    kobayashi_threshold_below_bound: bool
    smt_threshold_below_bound: bool
    smt_ratio: Fraction
    smt_ratio_below_one: bool
    dimension: DimensionAudit
    asymptotic_ratio: str

    @computed_field
    @property
    def all_pass(self) -> bool:
        """Every exact flag of the row holds; the asymptotic ratio is informational."""
        return (
            self.basic_inequality
            and self.headline_base_comparison
            and self.kobayashi_threshold_below_bound
            and self.smt_threshold_below_bound
            and self.smt_ratio_below_one
            and self.dimension.exceptional_ok
            and self.dimension.regular_ok
            and self.dimension.index_count_ok
        )

    @field_serializer(
        "n", "k", "delta", "k_prime", "kobayashi_bound", "corollary_bound",
        "threshold_kobayashi", "threshold_smt", when_used="json",
    )
    def serialize_ints(self, value: int) -> str:
        return _int_text(value)

    @field_serializer("smt_ratio", when_used="always")
    def serialize_ratio(self, value: Fraction) -> str:
        return _frac_text(value)


class BoundReport(BaseModel):
    """Bounds table over a range of dimensions."""
    rows: List[BoundRow] = Field(default_factory=list)

    @computed_field
    @property
    def all_pass(self) -> bool:
        return all(row.all_pass for row in self.rows)

    def to_json(self) -> str:
        """One JSON object per n, integers as decimal strings."""
        return json.dumps([row.model_dump(mode="json") for row in self.rows], indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = []
        for row in self.rows:
            lines.append(f"n={row.n} k={row.k} delta={row.delta} k'={row.k_prime}")
            lines.append(f"  kobayashi_bound     {row.kobayashi_bound}")
            lines.append(f"  corollary_bound     {row.corollary_bound}  (larger: {row.larger_headline})")
            lines.append(f"  threshold_kobayashi {row.threshold_kobayashi}  below bound: {row.kobayashi_threshold_below_bound}")
            lines.append(f"  threshold_smt       {row.threshold_smt}  below bound: {row.smt_threshold_below_bound}")
            lines.append(f"  basic_inequality    {row.basic_inequality}")
            lines.append(f"  smt_ratio           {row.smt_ratio}  below one: {row.smt_ratio_below_one}")
            lines.append(
                f"  dimension margins   exceptional={row.dimension.exceptional_margin} "
                f"regular={row.dimension.regular_margin} index_count={row.dimension.index_count_lower}"
            )
            lines.append(f"  asymptotic_ratio    {row.asymptotic_ratio}")
            lines.append(f"  {'PASS' if row.all_pass else 'FAIL'}")
        lines.append("RESULT: " + ("PASS" if self.all_pass else "FAIL"))
        return "\n".join(lines)


# =============================================================================
# VERIFICATION REPORTS
# =============================================================================

class CheckResult(BaseModel):
    """Pass/fail counts of one identity check over a batch of instances."""
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: List[str] = Field(default_factory=list)
    seconds: float = Field(default=0.0, exclude=True)  # wall time, kept out of reports

    @computed_field
    @property
    def success(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, detail: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if detail and len(self.failures) < 5:
                self.failures.append(detail)


class VerifyReport(BaseModel):
    """Summary of one verification run."""
    suite: str
    seed: int
    size: str
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def success(self) -> bool:
        return all(check.success for check in self.checks)

    @property
    def total_instances(self) -> int:
        return sum(check.passed + check.failed for check in self.checks)

    def to_text(self) -> str:
        lines = [f"suite={self.suite} seed={self.seed} size={self.size}"]
        for check in self.checks:
            status = "PASS" if check.success else "FAIL"
            line = f"{status} {check.name}: passed={check.passed} failed={check.failed}"
            if check.skipped:
                line += f" skipped={check.skipped}"
            lines.append(line)
            for failure in check.failures:
                lines.append(f"    {failure}")
        lines.append("RESULT: " + ("PASS" if self.success else "FAIL"))
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, ensure_ascii=False)


class FamilyReport(BaseModel):
    """Checks run against one Fermat family file."""
    family: str
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def success(self) -> bool:
        return all(check.success for check in self.checks)

    def to_text(self) -> str:
        lines = [f"family={self.family}"]
        for check in self.checks:
            status = "PASS" if check.success else "FAIL"
            line = f"{status} {check.name}: passed={check.passed} failed={check.failed}"
            if check.skipped:
                line += f" skipped={check.skipped}"
            lines.append(line)
            for failure in check.failures:
                lines.append(f"    {failure}")
        lines.append("RESULT: " + ("PASS" if self.success else "FAIL"))
        return "\n".join(lines)
