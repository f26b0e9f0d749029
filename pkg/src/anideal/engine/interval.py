"""
Outward-rounded intervals with dyadic (MPFR) endpoints.

Every endpoint is produced under an explicit gmpy2 context: lower bounds are
rounded toward minus infinity and upper bounds toward plus infinity, so the
real result of an operation on any members of the operands always lies inside
the result. Precision is carried by each interval and never read from ambient
state.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import gmpy2
from gmpy2 import mpfr, mpq

from anideal.utils.logger import logger_setup

log = logger_setup(__name__)


def _down(precision: int) -> Any:
    return gmpy2.context(precision=precision, round=gmpy2.RoundDown)


def _up(precision: int) -> Any:
    return gmpy2.context(precision=precision, round=gmpy2.RoundUp)


def _exact(x: mpfr) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def _to_mpq(q: Fraction | int) -> mpq:
    q = Fraction(q)
    return mpq(q.numerator, q.denominator)


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] with MPFR endpoints."""

    lo: mpfr
    hi: mpfr
    precision: int = 53

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # --- construction -------------------------------------------------------

    @classmethod
    def from_rational(cls, q: Fraction | int, precision: int) -> "Interval":
        """Tightest enclosure of an exact rational at the given precision."""
        value = _to_mpq(q)
        with _down(precision):
            lo = mpfr(value)
        with _up(precision):
            hi = mpfr(value)
        return cls(lo, hi, precision)

    @classmethod
    def from_bounds(
        cls, lo: Fraction | int, hi: Fraction | int, precision: int
    ) -> "Interval":
        """Enclosure of the rational segment [lo, hi]."""
        with _down(precision):
            low = mpfr(_to_mpq(lo))
        with _up(precision):
            high = mpfr(_to_mpq(hi))
        return cls(low, high, precision)

    @classmethod
    def pi(cls, precision: int) -> "Interval":
        with _down(precision):
            lo = gmpy2.const_pi()
        with _up(precision):
            hi = gmpy2.const_pi()
        return cls(lo, hi, precision)

    @classmethod
    def unit(cls, precision: int = 53) -> "Interval":
        return cls.from_bounds(0, 1, precision)

    def at_precision(self, precision: int) -> "Interval":
        """Same endpoints, outward-rounded to another precision when narrowing."""
        with _down(precision):
            lo = mpfr(self.lo)
        with _up(precision):
            hi = mpfr(self.hi)
        return Interval(lo, hi, precision)

    # --- inspection ---------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return bool(gmpy2.is_finite(self.lo) and gmpy2.is_finite(self.hi))

    @property
    def lower(self) -> Fraction:
        return _exact(self.lo)

    @property
    def upper(self) -> Fraction:
        return _exact(self.hi)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, q: Fraction | int) -> bool:
        if not self.is_finite:
            return True
        return self.lower <= Fraction(q) <= self.upper

    def contains_zero(self) -> bool:
        return bool(self.lo <= 0 <= self.hi) or not self.is_finite

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def sign(self) -> int | None:
        """+1 or -1 when certified, 0 for the exact zero, None otherwise."""
        if not self.is_finite:
            return None
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def magnitude(self) -> Fraction:
        """Upper bound of |x| over the interval."""
        return max(abs(self.lower), abs(self.upper))

    def subset_of(self, other: "Interval") -> bool:
        return bool(other.lo <= self.lo and self.hi <= other.hi)

    def overlaps(self, other: "Interval") -> bool:
        return bool(self.lo <= other.hi and other.lo <= self.hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(
            min(self.lo, other.lo),
            max(self.hi, other.hi),
            max(self.precision, other.precision),
        )

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi, max(self.precision, other.precision))

    # --- arithmetic ---------------------------------------------------------

    def _prec(self, other: "Interval") -> int:
        return max(self.precision, other.precision)

    def __add__(self, other: "Interval") -> "Interval":
        p = self._prec(other)
        with _down(p):
            lo = self.lo + other.lo
        with _up(p):
            hi = self.hi + other.hi
        return Interval(lo, hi, p)

    def __sub__(self, other: "Interval") -> "Interval":
        p = self._prec(other)
        with _down(p):
            lo = self.lo - other.hi
        with _up(p):
            hi = self.hi - other.lo
        return Interval(lo, hi, p)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.precision)

    def __mul__(self, other: "Interval") -> "Interval":
        p = self._prec(other)
        pairs = (
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        )
        with _down(p):
            lo = min(a * b for a, b in pairs)
        with _up(p):
            hi = max(a * b for a, b in pairs)
        return Interval(lo, hi, p)

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError(f"reciprocal of an interval containing 0: {self}")
        with _down(self.precision):
            lo = 1 / self.hi
        with _up(self.precision):
            hi = 1 / self.lo
        return Interval(lo, hi, self.precision)

    def __truediv__(self, other: "Interval") -> "Interval":
        return self * other.reciprocal()

    def scale(self, q: Fraction | int) -> "Interval":
        return self * Interval.from_rational(q, self.precision)

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            raise ValueError("negative exponents are not supported")
        if n == 0:
            return Interval.from_rational(1, self.precision)
        p = self.precision
        if n % 2 == 1 or self.lo >= 0:
            with _down(p):
                lo = self.lo**n
            with _up(p):
                hi = self.hi**n
            return Interval(lo, hi, p)
        if self.hi <= 0:
            with _down(p):
                lo = self.hi**n
            with _up(p):
                hi = self.lo**n
            return Interval(lo, hi, p)
        with _up(p):
            hi = max(-self.lo, self.hi) ** n
        return Interval(mpfr(0), hi, p)

    # --- elementary functions -----------------------------------------------

    def _monotone(self, fn: Callable[[mpfr], mpfr]) -> "Interval":
        with _down(self.precision):
            lo = fn(self.lo)
        with _up(self.precision):
            hi = fn(self.hi)
        return Interval(lo, hi, self.precision)

    def exp(self) -> "Interval":
        return self._monotone(gmpy2.exp)

    def sinh(self) -> "Interval":
        return self._monotone(gmpy2.sinh)

    def cosh(self) -> "Interval":
        p = self.precision
        if self.lo >= 0:
            return self._monotone(gmpy2.cosh)
        if self.hi <= 0:
            with _down(p):
                lo = gmpy2.cosh(self.hi)
            with _up(p):
                hi = gmpy2.cosh(self.lo)
            return Interval(lo, hi, p)
        with _up(p):
            hi = max(gmpy2.cosh(self.lo), gmpy2.cosh(self.hi))
        return Interval(mpfr(1), hi, p)

    def _hits_period(self, shift: "Interval") -> bool:
        """True when (self - shift) / 2pi may contain an integer."""
        two_pi = Interval.pi(self.precision).scale(2)
        t = (self - shift) / two_pi
        return bool(gmpy2.floor(t.hi) >= gmpy2.ceil(t.lo))

    def _periodic(
        self,
        fn: Callable[[mpfr], mpfr],
        peak: "Interval",
        trough: "Interval",
    ) -> "Interval":
        p = self.precision
        if not self.is_finite or self.width >= 7:
            return Interval(mpfr(-1), mpfr(1), p)
        with _down(p):
            lo = min(fn(self.lo), fn(self.hi))
        with _up(p):
            hi = max(fn(self.lo), fn(self.hi))
        if self._hits_period(peak):
            hi = mpfr(1)
        if self._hits_period(trough):
            lo = mpfr(-1)
        return Interval(max(lo, mpfr(-1)), min(hi, mpfr(1)), p)

    def sin(self) -> "Interval":
        half_pi = Interval.pi(self.precision).scale(Fraction(1, 2))
        return self._periodic(gmpy2.sin, half_pi, -half_pi)

    def cos(self) -> "Interval":
        pi = Interval.pi(self.precision)
        return self._periodic(gmpy2.cos, Interval.from_rational(0, self.precision), pi)

    # --- output -------------------------------------------------------------

    def decimal_bounds(self, digits: int = 20) -> tuple[str, str]:
        """Decimal strings for lo (rounded down) and hi (rounded up)."""
        return format(self.lo, f".{digits}Df"), format(self.hi, f".{digits}Uf")

    def decimal_width(self, digits: int = 6) -> str:
        """Width in scientific notation, rounded up."""
        if not self.is_finite:
            return "inf"
        return scientific_up(self.width, digits)

    def __str__(self) -> str:
        lo, hi = self.decimal_bounds(17)
        return f"[{lo}, {hi}]"


def decimal_enclosure(
    lo: Fraction, hi: Fraction, digits: int = 20
) -> tuple[str, str, str]:
    """
    Outward-rounded decimal rendering of an exact rational segment.

    :param lo: exact lower endpoint
    :param hi: exact upper endpoint
    :param digits: digits after the decimal point
    :return: (lo, hi, width) strings
    """
    segment = Interval.from_bounds(lo, hi, 256)
    low, high = segment.decimal_bounds(digits)
    return low, high, scientific_up(Fraction(hi) - Fraction(lo))


def decimal_value(q: Fraction, digits: int = 20) -> str:
    """Nearest decimal rendering of an exact rational, for display only."""
    with gmpy2.context(precision=256, round=gmpy2.RoundToNearest):
        return format(mpfr(_to_mpq(q)), f".{digits}f")


def scientific_up(q: Fraction, digits: int = 6) -> str:
    """
    Scientific notation of a nonnegative rational with the mantissa rounded
    up to `digits` places after the point, e.g. 2.500000e-01.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"negative width {q}")
    if q == 0:
        return f"{0:.{digits}e}"
    exponent = len(str(q.numerator)) - len(str(q.denominator))
    if q < Fraction(10) ** exponent:
        exponent -= 1
    elif q >= Fraction(10) ** (exponent + 1):
        exponent += 1
    scaled = q / Fraction(10) ** (exponent - digits)
    mantissa = -(-scaled.numerator // scaled.denominator)
    if mantissa >= 10 ** (digits + 1):
        mantissa = -(-mantissa // 10)
        exponent += 1
    text = str(mantissa)
    fraction_part = f".{text[1:]}" if digits else ""
    return f"{text[0]}{fraction_part}e{exponent:+03d}"
