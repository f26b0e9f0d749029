"""
This module contains custom exceptions for the anideal application.
"""

from fractions import Fraction
from typing import Any, Iterable


class AnidealError(Exception):
    """Base class for all application-specific errors."""

    pass


class ExpressionSyntaxError(AnidealError):
    """Raised when expression text does not match the grammar."""

    def __init__(self, offset: int, expected: Iterable[str], found: str = "") -> None:
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        wanted = ", ".join(sorted(self.expected))
        got = f"'{found}'" if found else "end of input"
        super().__init__(f"at byte {offset}: expected one of {{{wanted}}}, found {got}")


class DivisionByZeroConstant(AnidealError):
    """Raised when a constant denominator folds to exactly zero."""

    pass


class NotAnalyticError(AnidealError):
    """Raised when a denominator may vanish somewhere on [0,1]."""

    def __init__(self, witness: tuple[Fraction, Fraction], message: str = "") -> None:
        self.witness = witness
        lo, hi = witness
        super().__init__(
            message or f"denominator may vanish on [{float(lo):.17g}, {float(hi):.17g}]"
        )


class UndecidableError(AnidealError):
    """Raised inside the engine when a sign or identity cannot be certified."""

    def __init__(self, interval: tuple[Fraction, Fraction], reason: str) -> None:
        self.interval = interval
        self.reason = reason
        super().__init__(reason)


class PrecisionExhausted(AnidealError):
    """Raised when a requested width lies below the precision cap."""

    pass


class PointIdentityUndecidable(AnidealError):
    """Raised when two points can be neither merged nor separated."""

    def __init__(self, left: Any, right: Any) -> None:
        self.left = left
        self.right = right
        super().__init__(f"cannot decide whether {left} and {right} are the same point")


class ZeroDivisorArgument(AnidealError):
    """Raised when the zero ideal is used as the divisor of a quotient."""

    pass


class ZeroIdealNotFactorable(AnidealError):
    """Raised when the zero ideal is asked for its maximal factors."""

    pass


class DivisionByZeroPoly(AnidealError):
    """Raised when a polynomial is divided by the zero polynomial."""

    pass


class BothZeroError(AnidealError):
    """Raised when the gcd of two zero polynomials is requested."""

    pass


class OracleDisagreement(AnidealError):
    """Raised when the exact polynomial oracle contradicts the engine."""

    pass


class InvalidParamsError(AnidealError):
    """Raised when command-line arguments or settings are invalid or inconsistent."""

    pass
