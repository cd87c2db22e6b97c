"""
Exception hierarchy shared by the trichain modules.
"""

from typing import Any, Optional


class TrichainError(Exception):
    """Base class for every error raised by trichain."""


class DomainError(TrichainError, ValueError):
    """An operation was called outside its mathematical domain."""


class NotRegularError(DomainError):
    """
    A triangular set is not a zero-dimensional regular chain.

    Args:
        message: Human readable diagnostic
        index: Position of the offending polynomial in the chain
        initial: The initial that is zero or a zero divisor (text form)
    """

    def __init__(self, message: str, index: Optional[int] = None, initial: Optional[str] = None):
        super().__init__(message)
        self.index = index
        self.initial = initial


class PointNotZeroError(DomainError):
    """A query point does not vanish on the chain."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class InvariantViolation(TrichainError, RuntimeError):
    """An internal invariant was broken. Never caught inside the library."""


class IsolationError(TrichainError):
    """Real root isolation hit its bisection depth cap."""

    def __init__(self, message: str, level: Optional[int] = None, depth: Optional[int] = None):
        super().__init__(message)
        self.level = level
        self.depth = depth


class StabilizationError(TrichainError):
    """The Macaulay nullity did not stabilize before the order cap."""

    def __init__(self, message: str, last_nullity: Any = None, order: Optional[int] = None):
        super().__init__(message)
        self.last_nullity = last_nullity
        self.order = order


class ParseError(DomainError):
    """
    Malformed text input.

    Args:
        message: Human readable diagnostic
        line: 1-based line number, if known
        column: 1-based column number, if known
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = ''
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else '') + ': '
        super().__init__(location + message)
        self.line = line
        self.column = column
