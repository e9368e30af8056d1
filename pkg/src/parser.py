"""
LogJet - Expression and Family-File Parser
Parses polynomial expressions and Fermat family description files.

Expression grammar (whitespace insignificant):
    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | INTEGER '/' INTEGER | NAME | '(' expr ')'
    NAME   := [a-zA-Z][a-zA-Z0-9_]*

A rational literal a/b is a single token; there is no division operator.
Jet variables are ordinary names of the form D<j><coord>, e.g. D2z1.

Family files are UTF-8 key = value lines; '#' starts a comment:
    n = 1
    N = 1
    delta = 1
    epsilon = 2
    r = 3
    k = 2
    tau = 1, z1
    a[1,0] = 1 + z1
    a[0,1] = 2 - z1^2
    frame = z1, z1^2        (optional)
    point = 2               (optional)
"""

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from .exceptions import FamilyFileError, ParseError
from .models import FermatFamily
from .multipoly import Poly

logger = logging.getLogger(__name__)


class ExpressionParser:
    """Recursive-descent parser producing exact `Poly` values."""

    TOKEN_PATTERNS = [
        ("RATIONAL", r"\d+\s*/\s*\d+"),
        ("INTEGER", r"\d+"),
        ("NAME", r"[a-zA-Z][a-zA-Z0-9_]*"),
        ("OP", r"[+\-*^()]"),
        ("SPACE", r"\s+"),
    ]

    def __init__(self):
        self._token_regex = re.compile(
            "|".join(f"(?P<{name}>{pattern})" for name, pattern in self.TOKEN_PATTERNS)
        )

    def tokenize(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        position = 0
        while position < len(text):
            match = self._token_regex.match(text, position)
            if not match:
                raise ParseError(f"unexpected character {text[position]!r}", text=text, position=position)
            kind = match.lastgroup
            if kind != "SPACE":
                tokens.append((kind, match.group(), position))
            position = match.end()
        return tokens

    def parse(self, text: str) -> Poly:
        """Parse one polynomial expression."""
        if text is None or not text.strip():
            raise ParseError("empty expression", text=text)
        self._text = text
        self._tokens = self.tokenize(text)
        self._index = 0
        result = self._expr()
        if self._index != len(self._tokens):
            _, value, position = self._tokens[self._index]
            raise ParseError(f"unexpected token {value!r}", text=text, position=position)
        return result

    def parse_list(self, text: str) -> List[Poly]:
        """Parse a comma-separated list of expressions."""
        if text is None or not text.strip():
            raise ParseError("empty expression list", text=text)
        return [self.parse(part) for part in text.split(",")]

    def parse_scalar(self, text: str) -> Fraction:
        poly = self.parse(text)
        if not poly.is_constant():
            raise ParseError(f"expected a rational constant, got {poly}", text=text)
        return poly.constant_value()

    # ------------------------------------------------------------------

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        if self._index < len(self._tokens):
            return self._tokens[self._index]
        return None

    def _take(self) -> Tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise ParseError("unexpected end of expression", text=self._text, position=len(self._text))
        self._index += 1
        return token

    def _expr(self) -> Poly:
        result = self._term()
        while True:
            token = self._peek()
            if token and token[0] == "OP" and token[1] in "+-":
                self._index += 1
                right = self._term()
                result = result + right if token[1] == "+" else result - right
            else:
                return result

    def _term(self) -> Poly:
        result = self._unary()
        while True:
            token = self._peek()
            if token and token[0] == "OP" and token[1] == "*":
                self._index += 1
                result = result * self._unary()
            else:
                return result

    def _unary(self) -> Poly:
        token = self._peek()
        if token and token[0] == "OP" and token[1] in "+-":
            self._index += 1
            operand = self._unary()
            return -operand if token[1] == "-" else operand
        return self._power()

    def _power(self) -> Poly:
        base = self._atom()
        token = self._peek()
        if token and token[0] == "OP" and token[1] == "^":
            self._index += 1
            kind, value, position = self._take()
            if kind != "INTEGER":
                raise ParseError(f"exponent must be a non-negative integer, got {value!r}", text=self._text, position=position)
            return base ** int(value)
        return base

    def _atom(self) -> Poly:
        kind, value, position = self._take()
        if kind == "INTEGER":
            return Poly.const(int(value))
        if kind == "RATIONAL":
            numerator, denominator = (int(part) for part in value.split("/"))
            if denominator == 0:
                raise ParseError("zero denominator in rational literal", text=self._text, position=position)
            return Poly.const(Fraction(numerator, denominator))
        if kind == "NAME":
            return Poly.var(value)
        if kind == "OP" and value == "(":
            inner = self._expr()
            kind, value, position = self._take()
            if value != ")":
                raise ParseError(f"expected ')', got {value!r}", text=self._text, position=position)
            return inner
        raise ParseError(f"unexpected token {value!r}", text=self._text, position=position)


def parse_poly(text: str) -> Poly:
    return ExpressionParser().parse(text)


def parse_polys(text: str) -> List[Poly]:
    return ExpressionParser().parse_list(text)


class FamilyFileParser:
    """
    Reads Fermat family description files.

    Scalar keys (n, N, delta, epsilon, r, k) are integers; `tau`, `frame` and
    `point` are comma-separated lists; each `a[i0,...,iN]` line sets one
    coefficient. Duplicate keys and unknown keys are rejected.
    """

    SCALAR_KEYS = ("n", "N", "delta", "epsilon", "r", "k")
    LIST_KEYS = ("tau", "frame", "point")
    LINE_PATTERN = r"^\s*([A-Za-z]+)(?:\[([0-9,\s]*)\])?\s*=\s*(.*?)\s*$"

    def __init__(self):
        self._line_regex = re.compile(self.LINE_PATTERN)
        self._expressions = ExpressionParser()

    def parse_file(self, filepath: Path) -> FermatFamily:
        filepath = Path(filepath)
        logger.info(f"📖 Reading family file: {filepath}")
        if not filepath.exists():
            raise FamilyFileError("family file not found", filename=str(filepath))
        try:
            text = filepath.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise FamilyFileError(f"cannot read family file: {exc}", filename=str(filepath)) from exc
        return self.parse_text(text, filename=str(filepath))

    def parse_text(self, text: str, filename: str = None) -> FermatFamily:
        scalars: Dict[str, int] = {}
        lists: Dict[str, str] = {}
        coefficients: Dict[Tuple[int, ...], Poly] = {}

        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            match = self._line_regex.match(line)
            if not match:
                raise FamilyFileError(f"cannot parse line {raw.strip()!r}", line_number=line_number, filename=filename)
            key, index_text, value = match.groups()
            try:
                if index_text is not None:
                    if key != "a":
                        raise FamilyFileError(f"only 'a' takes an index, got {key!r}", line_number=line_number, filename=filename)
                    index = tuple(int(part) for part in index_text.split(",") if part.strip())
                    if index in coefficients:
                        raise FamilyFileError(f"duplicate coefficient a{list(index)}", line_number=line_number, filename=filename)
                    coefficients[index] = self._expressions.parse(value)
                elif key in self.SCALAR_KEYS:
                    if key in scalars:
                        raise FamilyFileError(f"duplicate key {key!r}", line_number=line_number, filename=filename)
                    if not re.fullmatch(r"-?\d+", value):
                        raise FamilyFileError(f"{key} must be an integer, got {value!r}", line_number=line_number, filename=filename)
                    scalars[key] = int(value)
                elif key in self.LIST_KEYS:
                    if key in lists:
                        raise FamilyFileError(f"duplicate key {key!r}", line_number=line_number, filename=filename)
                    lists[key] = value
                else:
                    raise FamilyFileError(f"unknown key {key!r}", line_number=line_number, filename=filename)
            except ParseError as exc:
                raise FamilyFileError(f"bad expression: {exc}", line_number=line_number, filename=filename) from exc

        missing = [key for key in self.SCALAR_KEYS if key not in scalars]
        if missing:
            raise FamilyFileError(f"missing keys: {', '.join(missing)}", filename=filename)

        try:
            if "tau" in lists:
                tau = tuple(self._expressions.parse_list(lists["tau"]))
            else:
                # affine chart of the homogeneous coordinates on P^n
                tau = (Poly.one(),) + tuple(Poly.var(f"z{i}") for i in range(1, scalars["n"] + 1))
            frame = tuple(self._expressions.parse_list(lists["frame"])) if "frame" in lists else None
            point = None
            if "point" in lists:
                point = tuple(self._expressions.parse_scalar(part) for part in lists["point"].split(","))
        except ParseError as exc:
            raise FamilyFileError(f"bad expression list: {exc}", filename=filename) from exc

        try:
            family = FermatFamily(
                n=scalars["n"], N=scalars["N"], delta=scalars["delta"], epsilon=scalars["epsilon"],
                r=scalars["r"], k=scalars["k"], tau=tau, a=coefficients, frame=frame, point=point,
            )
        except ValidationError as exc:
            first = exc.errors()[0]
            raise FamilyFileError(f"invalid family: {first.get('msg', exc)}", filename=filename) from exc

        logger.info(f"✅ Family loaded: n={family.n}, N={family.N}, delta={family.delta}, {len(family.a)} coefficients")
        return family
