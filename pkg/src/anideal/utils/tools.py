import argparse
import re
from fractions import Fraction
from math import floor

from anideal.engine.params import PRECISION_LADDER
from anideal.utils.logger import logger_setup

log = logger_setup(__name__)

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:/(\d+)|\.(\d+))?\s*$")
_POWER_OF_TWO = re.compile(r"^\s*2\s*(?:\^|\*\*)\s*(-?\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    """
    Exact value of "p", "p/q" or a decimal literal such as "0.25".

    :param text: number text
    :return: the rational it denotes
    :raises ValueError: for anything else
    """
    m = _RATIONAL.match(text)
    if m is None:
        raise ValueError(f"'{text}' is not a rational number")
    whole, denominator, digits = m.groups()
    if denominator is not None:
        if int(denominator) == 0:
            raise ValueError(f"'{text}' has a zero denominator")
        return Fraction(int(whole), int(denominator))
    if digits is not None:
        sign = -1 if whole.startswith("-") else 1
        return sign * Fraction(int(whole.lstrip("-") + digits), 10 ** len(digits))
    return Fraction(int(whole))


def parse_tolerance(text: str) -> Fraction:
    """
    Width given as "2^-k", "2**-k" or any rational literal.
    """
    m = _POWER_OF_TWO.match(text)
    if m:
        return Fraction(2) ** int(m.group(1))
    return parse_rational(text)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """
    The rational with the least denominator in the open interval (lo, hi).

    :raises ValueError: if the interval is empty
    """
    if lo >= hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    above = floor(lo) + 1
    if above < hi:
        return Fraction(above)
    base = floor(lo)
    a, b = lo - base, hi - base
    if a == 0:
        return base + Fraction(1, floor(1 / b) + 1)
    return base + 1 / simplest_between(1 / b, 1 / a)


def valid_unit_point(value: str) -> Fraction:
    """argparse type: a rational in [0,1]."""
    try:
        q = parse_rational(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    if not 0 <= q <= 1:
        raise argparse.ArgumentTypeError(f"{value} is not in [0,1]")
    return q


def valid_precision(value: str) -> int:
    """argparse type: one of the ladder precisions."""
    try:
        bits = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer") from e
    if bits not in PRECISION_LADDER:
        raise argparse.ArgumentTypeError(
            f"precision must be one of {', '.join(map(str, PRECISION_LADDER))}"
        )
    return bits


def valid_tolerance(value: str) -> Fraction:
    """argparse type: a positive width."""
    try:
        width = parse_tolerance(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    if width <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return width


def positive_int(value: str) -> int:
    """argparse type: an integer >= 1."""
    try:
        n = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer") from e
    if n < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return n


def nonnegative_int(value: str) -> int:
    """argparse type: an integer >= 0."""
    try:
        n = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer") from e
    if n < 0:
        raise argparse.ArgumentTypeError(f"{value} must not be negative")
    return n
