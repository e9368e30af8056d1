"""
LogJet - Sparse Polynomial Arithmetic
Exact multivariate polynomials over Q and rational functions with factored denominators.

Variables are plain names. Names of the form D<j><coord> (e.g. D2z1) are jet
variables and always sort after base variables; everything else sorts in
natural order (t < z1 < z2 < z10). Terms print in graded-lexicographic order.
"""

import heapq
import logging
import re
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import NotDivisible, PoleAtBasepoint, PreconditionError

logger = logging.getLogger(__name__)

# Coefficient field. Fraction keeps lowest terms with a positive denominator.
Rat = Fraction
Scalar = Union[int, Fraction]

JET_NAME_PATTERN = re.compile(r"^D(\d+)([a-zA-Z][a-zA-Z0-9_]*)$")
_DIGITS = re.compile(r"(\d+)")
_SENTINEL = ((9,), 0)


def _natural(name: str) -> tuple:
    return tuple(int(chunk) if chunk.isdigit() else chunk for chunk in _DIGITS.split(name) if chunk)


@lru_cache(maxsize=None)
def variable_key(name: str) -> tuple:
    """Global variable order: base variables first, then jet variables by order and coordinate."""
    match = JET_NAME_PATTERN.match(name)
    if match:
        return (1, int(match.group(1)), _natural(match.group(2)))
    return (0, 0, _natural(name))


class MultiIndex(tuple):
    """
    Sparse exponent vector: a tuple of (variable, exponent) pairs sorted by
    `variable_key`. Absent variables have exponent 0.
    """

    __slots__ = ()

    @classmethod
    def of(cls, exponents: Mapping[str, int]) -> "MultiIndex":
        items = []
        for var, exp in exponents.items():
            if exp < 0:
                raise PreconditionError(f"negative exponent {exp} for {var}", parameter="exponents")
            if exp:
                items.append((var, int(exp)))
        items.sort(key=lambda item: variable_key(item[0]))
        return cls(items)

    @property
    def degree(self) -> int:
        return sum(exp for _, exp in self)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(var for var, _ in self)

    def exponent(self, var: str) -> int:
        for name, exp in self:
            if name == var:
                return exp
        return 0

    def as_dict(self) -> Dict[str, int]:
        return dict(self)

    def times(self, other: "MultiIndex") -> "MultiIndex":
        if not other:
            return self
        if not self:
            return other
        out = []
        i = j = 0
        while i < len(self) and j < len(other):
            va, ea = self[i]
            vb, eb = other[j]
            if va == vb:
                out.append((va, ea + eb))
                i += 1
                j += 1
            elif variable_key(va) < variable_key(vb):
                out.append(self[i])
                i += 1
            else:
                out.append(other[j])
                j += 1
        out.extend(self[i:])
        out.extend(other[j:])
        return MultiIndex(out)

    def divides(self, other: "MultiIndex") -> bool:
        exps = dict(other)
        return all(exps.get(var, 0) >= exp for var, exp in self)

    def over(self, divisor: "MultiIndex") -> "MultiIndex":
        """Quotient self / divisor; the caller guarantees divisibility."""
        exps = dict(self)
        for var, exp in divisor:
            exps[var] -= exp
        return MultiIndex.of(exps)

    def lowered(self, var: str, amount: int = 1) -> "MultiIndex":
        exps = dict(self)
        exps[var] -= amount
        return MultiIndex.of(exps)


ONE_MONOMIAL = MultiIndex()


@lru_cache(maxsize=200_000)
def grlex_key(mono: MultiIndex) -> tuple:
    """Ascending sort on this key lists monomials from largest to smallest in grlex."""
    return (-mono.degree, tuple((variable_key(var), -exp) for var, exp in mono) + (_SENTINEL,))


def _format_monomial(mono: MultiIndex) -> str:
    return "*".join(var if exp == 1 else f"{var}^{exp}" for var, exp in mono)


class Poly:
    """
    Immutable sparse polynomial with Fraction coefficients.

    Zero coefficients are never stored, so structural equality is polynomial
    equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[MultiIndex, Scalar] = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, clean: Dict[MultiIndex, Fraction]) -> "Poly":
        poly = cls.__new__(cls)
        poly._terms = clean
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls._wrap({})

    @classmethod
    def one(cls) -> "Poly":
        return cls.const(1)

    @classmethod
    def const(cls, value: Scalar) -> "Poly":
        return cls({ONE_MONOMIAL: value})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._wrap({MultiIndex(((name, 1),)): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff: Scalar = 1) -> "Poly":
        return cls({MultiIndex.of(exponents): coeff})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Poly")

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PreconditionError(f"{self} is not constant", parameter="p")
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get(ONE_MONOMIAL) == 1

    @property
    def variables(self) -> Tuple[str, ...]:
        names = {var for mono in self._terms for var, _ in mono}
        return tuple(sorted(names, key=variable_key))

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono.degree for mono in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        return max((mono.exponent(var) for mono in self._terms), default=0)

    def sorted_terms(self) -> List[Tuple[MultiIndex, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: grlex_key(item[0]))

    def leading(self) -> Tuple[MultiIndex, Fraction]:
        if not self._terms:
            raise PreconditionError("zero polynomial has no leading term", parameter="p")
        mono = min(self._terms, key=grlex_key)
        return mono, self._terms[mono]

    def monomial_content(self) -> MultiIndex:
        """Largest monomial dividing every term."""
        if not self._terms:
            return ONE_MONOMIAL
        monos = iter(self._terms)
        common = dict(next(monos))
        for mono in monos:
            exps = dict(mono)
            common = {var: min(exp, exps[var]) for var, exp in common.items() if var in exps}
            if not common:
                break
        return MultiIndex.of(common)

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            value = out.get(mono, 0) + coeff
            if value:
                out[mono] = value
            else:
                out.pop(mono, None)
        return Poly._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._wrap({mono: -coeff for mono, coeff in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly.const(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self._terms or not other._terms:
            return Poly.zero()
        out: Dict[MultiIndex, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1.times(m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly._wrap({mono: coeff for mono, coeff in out.items() if coeff})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise PreconditionError(f"negative power {exponent}", parameter="exponent")
        result = Poly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: Scalar) -> "Poly":
        if not factor:
            return Poly.zero()
        factor = Fraction(factor)
        return Poly._wrap({mono: coeff * factor for mono, coeff in self._terms.items()})

    def times_monomial(self, mono: MultiIndex, coeff: Scalar = 1) -> "Poly":
        coeff = Fraction(coeff)
        if not coeff:
            return Poly.zero()
        return Poly._wrap({m.times(mono): c * coeff for m, c in self._terms.items()})

    def divide_monomial(self, mono: MultiIndex) -> "Poly":
        """Divide by a monomial that divides every term."""
        return Poly._wrap({m.over(mono): c for m, c in self._terms.items()})

    # ------------------------------------------------------------------
    # Calculus and evaluation
    # ------------------------------------------------------------------

    def partial_derivative(self, var: str) -> "Poly":
        out: Dict[MultiIndex, Fraction] = {}
        for mono, coeff in self._terms.items():
            exp = mono.exponent(var)
            if exp:
                lowered = mono.lowered(var)
                out[lowered] = out.get(lowered, 0) + coeff * exp
        return Poly._wrap({m: c for m, c in out.items() if c})

    def derive(self, rule: Callable[[str], "Poly"]) -> "Poly":
        """Apply the derivation sending each variable v to rule(v)."""
        images: Dict[str, Poly] = {}
        out: Dict[MultiIndex, Fraction] = {}
        for mono, coeff in self._terms.items():
            for var, exp in mono:
                image = images.get(var)
                if image is None:
                    image = images[var] = rule(var)
                if not image._terms:
                    continue
                lowered = mono.lowered(var)
                scale = coeff * exp
                for m2, c2 in image._terms.items():
                    target = lowered.times(m2)
                    out[target] = out.get(target, 0) + scale * c2
        return Poly._wrap({m: c for m, c in out.items() if c})

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            value = coeff
            for var, exp in mono:
                if var not in point:
                    raise PreconditionError(f"no value for variable {var}", parameter=var)
                value *= Fraction(point[var]) ** exp
            total += value
        return total

    def compose(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Substitute polynomials for variables; unmapped variables stay."""
        powers: Dict[Tuple[str, int], Poly] = {}
        acc: Dict[MultiIndex, Fraction] = {}
        for mono, coeff in self._terms.items():
            kept = []
            product = Poly.const(coeff)
            for var, exp in mono:
                if var in mapping:
                    key = (var, exp)
                    if key not in powers:
                        powers[key] = Poly.coerce(mapping[var]) ** exp
                    product = product * powers[key]
                else:
                    kept.append((var, exp))
            if kept:
                product = product.times_monomial(MultiIndex.of(dict(kept)))
            for m, c in product._terms.items():
                acc[m] = acc.get(m, 0) + c
        return Poly._wrap({m: c for m, c in acc.items() if c})

    def substitute(self, mapping: Mapping[str, Union["Poly", "RatFunc"]]) -> "RatFunc":
        return substitute(self, mapping)

    # ------------------------------------------------------------------
    # Division
    # ------------------------------------------------------------------

    def exact_divide(self, divisor: "Poly") -> "Poly":
        """
        Exact quotient under graded-lex long division.

        Raises NotDivisible as soon as the leading term of the running
        remainder is not a multiple of the divisor's leading term.
        """
        if divisor.is_zero():
            raise PreconditionError("division by the zero polynomial", parameter="q")
        if divisor.is_constant():
            return self.scale(Fraction(1) / divisor.constant_value())
        lead_mono, lead_coeff = divisor.leading()
        remainder = dict(self._terms)
        heap = [(grlex_key(m), m) for m in remainder]
        heapq.heapify(heap)
        quotient: Dict[MultiIndex, Fraction] = {}
        others = [(m, c) for m, c in divisor._terms.items() if m != lead_mono]
        while heap:
            _, mono = heapq.heappop(heap)
            coeff = remainder.pop(mono, None)
            if coeff is None:
                continue
            if not lead_mono.divides(mono):
                raise NotDivisible(f"{self} is not divisible by {divisor}", divisor=str(divisor))
            q_mono = mono.over(lead_mono)
            q_coeff = coeff / lead_coeff
            quotient[q_mono] = quotient.get(q_mono, 0) + q_coeff
            for m, c in others:
                target = q_mono.times(m)
                value = remainder.get(target, 0) - q_coeff * c
                if value:
                    if target not in remainder:
                        heapq.heappush(heap, (grlex_key(target), target))
                    remainder[target] = value
                else:
                    remainder.pop(target, None)
        return Poly._wrap({m: c for m, c in quotient.items() if c})

    def is_multiple_of(self, other: "Poly") -> Optional[Fraction]:
        """Return c when self == c * other, else None."""
        if len(self._terms) != len(other._terms) or not other._terms:
            return None
        mono, coeff = next(iter(other._terms.items()))
        if mono not in self._terms:
            return None
        ratio = self._terms[mono] / coeff
        for m, c in other._terms.items():
            if self._terms.get(m) != c * ratio:
                return None
        return ratio

    # ------------------------------------------------------------------
    # Comparison and printing
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for position, (mono, coeff) in enumerate(self.sorted_terms()):
            magnitude = -coeff if coeff < 0 else coeff
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = _format_monomial(mono)
            else:
                body = f"{magnitude}*{_format_monomial(mono)}"
            if position == 0:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _needs_parens(poly: Poly) -> bool:
    if len(poly) != 1:
        return True
    (mono, coeff), = poly.terms.items()
    return coeff < 0 or (coeff != 1 and bool(mono)) or coeff.denominator != 1


class RatFunc:
    """
    Rational function num / prod(f^e) with the denominator kept factored.

    Factors are monic, non-constant polynomials; single-term factors are split
    into their variables. No multivariate GCD is taken: only variable factors
    are cancelled automatically, and `reduced` tries exact division on demand.
    Equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "_factors")

    def __init__(self, num, factors: Mapping[Poly, int] = None):
        num = Poly.coerce(num)
        self.num, self._factors = _normalize(num, factors.items() if factors else ())

    @classmethod
    def _wrap(cls, num: Poly, factors: Dict[Poly, int]) -> "RatFunc":
        value = cls.__new__(cls)
        value.num = num
        value._factors = factors
        return value

    @classmethod
    def coerce(cls, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        return cls(Poly.coerce(value))

    @classmethod
    def quotient(cls, num, den) -> "RatFunc":
        return cls.coerce(num) / cls.coerce(den)

    # ------------------------------------------------------------------

    @property
    def factors(self) -> Tuple[Tuple[Poly, int], ...]:
        return tuple(sorted(self._factors.items(), key=lambda item: (grlex_key(item[0].leading()[0]), str(item[0]))))

    @property
    def den(self) -> Poly:
        result = Poly.one()
        for factor, exp in self._factors.items():
            result = result * factor ** exp
        return result

    @property
    def variables(self) -> Tuple[str, ...]:
        names = set(self.num.variables)
        for factor in self._factors:
            names.update(factor.variables)
        return tuple(sorted(names, key=variable_key))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self._factors

    def as_poly(self) -> Poly:
        if self._factors:
            reduced = self.reduced()
            if reduced._factors:
                raise NotDivisible(f"{self} is not a polynomial", divisor=str(self.den))
            return reduced.num
        return self.num

    def reduced(self) -> "RatFunc":
        """Cancel every denominator factor that divides the numerator exactly."""
        num = self.num
        factors = dict(self._factors)
        for factor in list(factors):
            while factors.get(factor):
                try:
                    num = num.exact_divide(factor)
                except NotDivisible:
                    break
                factors[factor] -= 1
                if not factors[factor]:
                    del factors[factor]
        if num.is_zero():
            return RatFunc._wrap(num, {})
        return RatFunc._wrap(num, factors)

    # ------------------------------------------------------------------
    # Field operations
    # ------------------------------------------------------------------

    def _aligned(self, other: "RatFunc") -> Tuple[Poly, Poly, Dict[Poly, int]]:
        if self._factors == other._factors:
            return self.num, other.num, dict(self._factors)
        common = dict(self._factors)
        for factor, exp in other._factors.items():
            if common.get(factor, 0) < exp:
                common[factor] = exp
        return _lift(self.num, self._factors, common), _lift(other.num, other._factors, common), common

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        left, right, common = self._aligned(other)
        return RatFunc(left + right, common)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._wrap(-self.num, dict(self._factors))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc._wrap(self.num.scale(other), dict(self._factors) if other else {})
        if isinstance(other, Poly):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        left, right = self.num, other.num
        factors = dict(self._factors)
        for factor, exp in other._factors.items():
            factors[factor] = factors.get(factor, 0) + exp
        left, factors = _cancel_proportional(left, factors)
        right, factors = _cancel_proportional(right, factors)
        return RatFunc(left * right, factors)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        num = _lift(self.num, {}, other._factors)
        factors = dict(self._factors)
        factors[other.num] = factors.get(other.num, 0) + 1
        return RatFunc(num, factors)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent < 0:
            return RatFunc.coerce(1) / self ** (-exponent)
        return RatFunc._wrap(self.num ** exponent, {f: e * exponent for f, e in self._factors.items()} if exponent else {})

    # ------------------------------------------------------------------
    # Calculus and evaluation
    # ------------------------------------------------------------------

    def apply_derivation(self, derivation: Callable[[Poly], Poly]) -> "RatFunc":
        """Extend a polynomial derivation to the fraction with the quotient rule, factor by factor."""
        d_num = derivation(self.num)
        dependent = []
        for factor, exp in self._factors.items():
            d_factor = derivation(factor)
            if not d_factor.is_zero():
                dependent.append((factor, exp, d_factor))
        if not dependent:
            return RatFunc(d_num, self._factors)
        product = Poly.one()
        for factor, _, _ in dependent:
            product = product * factor
        numerator = d_num * product
        for position, (factor, exp, d_factor) in enumerate(dependent):
            others = Poly.one()
            for other_position, (other, _, _) in enumerate(dependent):
                if other_position != position:
                    others = others * other
            numerator = numerator - (self.num * d_factor * others).scale(exp)
        factors = dict(self._factors)
        for factor, exp, _ in dependent:
            factors[factor] = exp + 1
        return RatFunc(numerator, factors)

    def partial_derivative(self, var: str) -> "RatFunc":
        return self.apply_derivation(lambda poly: poly.partial_derivative(var))

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        den_value = Fraction(1)
        for factor, exp in self._factors.items():
            value = factor.evaluate(point)
            if not value:
                raise PoleAtBasepoint(f"denominator factor {factor} vanishes", point={k: str(v) for k, v in point.items() if k in factor.variables})
            den_value *= value ** exp
        return self.num.evaluate(point) / den_value

    def substitute(self, mapping: Mapping[str, Union[Poly, "RatFunc"]]) -> "RatFunc":
        result = substitute(self.num, mapping)
        for factor, exp in self._factors.items():
            result = result / substitute(factor, mapping) ** exp
        return result

    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_eq(self, other)

    __hash__ = None

    def __str__(self) -> str:
        value = self.reduced() if self._factors else self
        if not value._factors:
            return str(value.num)
        num = str(value.num)
        if len(value.num) > 1:
            num = f"({num})"
        pieces = []
        for factor, exp in value.factors:
            text = str(factor)
            if _needs_parens(factor):
                text = f"({text})"
            pieces.append(text if exp == 1 else f"{text}^{exp}")
        den = "*".join(pieces)
        if len(pieces) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _normalize(num: Poly, items: Iterable[Tuple[Poly, int]]) -> Tuple[Poly, Dict[Poly, int]]:
    factors: Dict[Poly, int] = {}
    if num.is_zero():
        return num, factors
    for factor, exp in items:
        factor = Poly.coerce(factor)
        if exp == 0:
            continue
        if exp < 0:
            raise PreconditionError(f"negative denominator exponent {exp}", parameter="factors")
        if factor.is_zero():
            raise ZeroDivisionError("zero denominator factor")
        if factor.is_constant():
            num = num.scale(Fraction(1) / factor.constant_value() ** exp)
            continue
        if len(factor) == 1:
            (mono, coeff), = factor.terms.items()
            num = num.scale(Fraction(1) / coeff ** exp)
            for var, var_exp in mono:
                key = Poly.var(var)
                factors[key] = factors.get(key, 0) + var_exp * exp
            continue
        _, lead = factor.leading()
        if lead != 1:
            factor = factor.scale(Fraction(1) / lead)
            num = num.scale(Fraction(1) / lead ** exp)
        factors[factor] = factors.get(factor, 0) + exp
    # cancel variable factors against the numerator's monomial content
    content = dict(num.monomial_content())
    if content:
        cut = {}
        for var, exp in content.items():
            key = Poly.var(var)
            if key in factors:
                amount = min(exp, factors[key])
                cut[var] = amount
                factors[key] -= amount
                if not factors[key]:
                    del factors[key]
        if cut:
            num = num.divide_monomial(MultiIndex.of(cut))
    return num, factors


def _lift(num: Poly, factors: Mapping[Poly, int], target: Mapping[Poly, int]) -> Poly:
    for factor, exp in target.items():
        missing = exp - factors.get(factor, 0)
        if missing:
            num = num * factor ** missing
    return num


def _cancel_proportional(num: Poly, factors: Dict[Poly, int]) -> Tuple[Poly, Dict[Poly, int]]:
    if len(num) < 2:
        return num, factors
    for factor, exp in factors.items():
        if exp and len(factor) == len(num):
            ratio = num.is_multiple_of(factor)
            if ratio is not None:
                factors = dict(factors)
                factors[factor] -= 1
                if not factors[factor]:
                    del factors[factor]
                return Poly.const(ratio), factors
    return num, factors


# ----------------------------------------------------------------------
# Module-level operations
# ----------------------------------------------------------------------

def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Exact add, sub or mul of two polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PreconditionError(f"unknown operation {op!r}", parameter="op")


def partial_derivative(p: Poly, var: str) -> Poly:
    return p.partial_derivative(var)


def exact_divide(p: Poly, q: Poly) -> Poly:
    return p.exact_divide(q)


def substitute(p: Poly, mapping: Mapping[str, Union[Poly, RatFunc]]) -> RatFunc:
    """Compose p with the given images; unmapped variables map to themselves."""
    if all(isinstance(image, (Poly, int, Fraction)) for image in mapping.values()):
        return RatFunc(p.compose({var: Poly.coerce(image) for var, image in mapping.items()}))
    images = {var: RatFunc.coerce(image) for var, image in mapping.items()}
    powers: Dict[Tuple[str, int], RatFunc] = {}
    result = RatFunc(Poly.zero())
    for mono, coeff in p.terms.items():
        term = RatFunc(Poly.const(coeff))
        kept = {}
        for var, exp in mono:
            if var in images:
                key = (var, exp)
                if key not in powers:
                    powers[key] = images[var] ** exp
                term = term * powers[key]
            else:
                kept[var] = exp
        if kept:
            term = term * Poly.monomial(kept)
        result = result + term
    return result


def ratfunc_eq(a: RatFunc, b: RatFunc) -> bool:
    """a == b as rational functions: a.num * b.den == b.num * a.den."""
    left, right, _ = a._aligned(b)
    return left == right


def is_zero(value) -> bool:
    if hasattr(value, "is_zero"):
        return value.is_zero()
    return value == 0


def determinant(matrix: Sequence[Sequence]):
    """
    Determinant by cofactor expansion along rows, memoized on column subsets.

    Works for any entries supporting +, - and * (Fraction, Poly, RatFunc, JetPoly).
    """
    size = len(matrix)
    if size == 0:
        return Fraction(1)
    if any(len(row) != size for row in matrix):
        raise PreconditionError("determinant of a non-square matrix", parameter="matrix")
    memo: Dict[Tuple[int, Tuple[int, ...]], object] = {}

    def expand(row: int, cols: Tuple[int, ...]):
        if row == size - 1:
            return matrix[row][cols[0]]
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = None
        for position, col in enumerate(cols):
            entry = matrix[row][col]
            if is_zero(entry):
                continue
            term = entry * expand(row + 1, cols[:position] + cols[position + 1:])
            if position % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            first = matrix[row][cols[0]]
            total = first - first
        memo[key] = total
        return total

    return expand(0, tuple(range(size)))
