"""
LogJet - Custom Exceptions
Specific exception classes for parsing, algebra and bound failures.
"""


class LogJetError(Exception):
    """Base exception for all LogJet errors."""

    def __init__(self, message: str, context: dict = None):
        super().__init__(message)
        self.context = context or {}

    def __str__(self):
        base = super().__str__()
        if self.context:
            context_str = ", ".join(f"{k}={v}" for k, v in self.context.items())
            return f"{base} [{context_str}]"
        return base


class ParseError(LogJetError):
    """Malformed polynomial expression."""

    def __init__(self, message: str, text: str = None, position: int = None):
        context = {}
        if text is not None:
            context["text"] = text
        if position is not None:
            context["pos"] = position
        super().__init__(message, context)
        self.text = text
        self.position = position


class FamilyFileError(LogJetError):
    """Errors while reading a Fermat family description file."""

    def __init__(self, message: str, line_number: int = None, filename: str = None):
        context = {}
        if line_number:
            context["line"] = line_number
        if filename:
            context["file"] = filename
        super().__init__(message, context)
        self.line_number = line_number
        self.filename = filename


class NotDivisible(LogJetError):
    """Exact polynomial division left a remainder."""

    def __init__(self, message: str, divisor: str = None):
        context = {"divisor": divisor} if divisor else {}
        super().__init__(message, context)
        self.divisor = divisor


class PoleAtBasepoint(LogJetError):
    """A coefficient denominator vanishes where a jet is evaluated."""

    def __init__(self, message: str, point: dict = None):
        context = {"point": point} if point else {}
        super().__init__(message, context)
        self.point = point


class InternalMismatch(LogJetError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, message: str, operation: str = None):
        context = {"op": operation} if operation else {}
        super().__init__(message, context)
        self.operation = operation


class NonTransverse(LogJetError):
    """Restriction along a hyperplane contained in the divisor."""

    def __init__(self, message: str, variable: str = None):
        context = {"variable": variable} if variable else {}
        super().__init__(message, context)
        self.variable = variable


class LevelViolation(LogJetError):
    """A tower vector field was applied to a function of too high a level."""

    def __init__(self, message: str, level: int = None, variable: str = None):
        context = {}
        if level is not None:
            context["level"] = level
        if variable:
            context["variable"] = variable
        super().__init__(message, context)
        self.level = level
        self.variable = variable


class SingularFrame(LogJetError):
    """The frame Wronskian matrix is singular."""

    def __init__(self, message: str, index: tuple = None):
        context = {"index": index} if index is not None else {}
        super().__init__(message, context)
        self.index = index


class TooSmall(LogJetError):
    """No admissible degree decomposition exists."""

    def __init__(self, message: str, m: int = None, n: int = None, mode: str = None):
        context = {}
        if m is not None:
            context["m"] = m
        if n is not None:
            context["n"] = n
        if mode:
            context["mode"] = mode
        super().__init__(message, context)
        self.m = m
        self.n = n
        self.mode = mode


class PreconditionError(LogJetError):
    """An operation was called outside its domain."""

    def __init__(self, message: str, parameter: str = None):
        context = {"param": parameter} if parameter else {}
        super().__init__(message, context)
        self.parameter = parameter
