from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal

from anideal.engine.expr import Expr, serialize
from anideal.engine.interval import Interval, decimal_enclosure
from anideal.engine.params import IsolationParams


@dataclass(frozen=True)
class ExactRational:
    """A point of [0,1] known exactly."""

    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        if not 0 <= self.value <= 1:
            raise ValueError(f"point {self.value} lies outside [0,1]")

    @property
    def lower(self) -> Fraction:
        return self.value

    @property
    def upper(self) -> Fraction:
        return self.value

    @property
    def width(self) -> Fraction:
        return Fraction(0)

    def contains(self, q: Fraction) -> bool:
        return self.value == q

    def interval(self, precision: int) -> Interval:
        return Interval.from_rational(self.value, precision)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Enclosure:
    """
    An isolating interval for exactly one zero of `function`.

    The certificate: the `multiplicity`-th derivative of `function` keeps a
    constant sign on [lo, hi] and the zero inside has that multiplicity.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int
    function: Expr

    def __post_init__(self) -> None:
        if not 0 <= self.lo <= self.hi <= 1:
            raise ValueError(f"enclosure [{self.lo}, {self.hi}] is not inside [0,1]")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be at least 1")

    @property
    def lower(self) -> Fraction:
        return self.lo

    @property
    def upper(self) -> Fraction:
        return self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: Fraction) -> bool:
        return self.lo <= q <= self.hi

    def interval(self, precision: int) -> Interval:
        return Interval.from_bounds(self.lo, self.hi, precision)

    def __str__(self) -> str:
        lo, hi, _ = decimal_enclosure(self.lo, self.hi, 17)
        return f"[{lo}, {hi}]"


Point = ExactRational | Enclosure


@dataclass(frozen=True)
class DivisorEntry:
    point: Point
    multiplicity: int

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError("divisor multiplicities must be at least 1")


@dataclass(frozen=True)
class Divisor:
    """Finite multiset of zeros in [0,1], sorted by lower endpoint."""

    entries: tuple[DivisorEntry, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(
            sorted(self.entries, key=lambda e: (e.point.lower, e.point.upper))
        )
        object.__setattr__(self, "entries", ordered)

    def __iter__(self) -> Iterator[DivisorEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @property
    def degree(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(e.point for e in self.entries)

    @property
    def all_rational(self) -> bool:
        return all(isinstance(e.point, ExactRational) for e in self.entries)


@dataclass(frozen=True)
class ZeroFunction:
    """The expression normalizes to the zero constant."""

    pass


@dataclass(frozen=True)
class Undecidable:
    """A sign or identity question the engine could not settle."""

    interval: tuple[Fraction, Fraction]
    reason: str

    def __str__(self) -> str:
        lo, hi = self.interval
        return f"undecidable on [{float(lo):.17g}, {float(hi):.17g}]: {self.reason}"


@dataclass(frozen=True)
class Analytic:
    """Every denominator is zero-free on [0,1]."""

    pass


@dataclass(frozen=True)
class NotAnalytic:
    """Some denominator may vanish on `witness`."""

    witness: tuple[Fraction, Fraction]
    denominator: Expr | None = None

    def __str__(self) -> str:
        lo, hi = self.witness
        where = f"[{float(lo):.17g}, {float(hi):.17g}]"
        if self.denominator is None:
            return f"not analytic: a denominator may vanish on {where}"
        return f"not analytic: denominator {serialize(self.denominator)} may vanish on {where}"


@dataclass(frozen=True)
class MultiplicityCertificate:
    """
    Multiplicity `multiplicity` of a zero in [lo, hi]; `exact` is the zero
    itself when it is a certified rational.
    """

    multiplicity: int
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None


@dataclass(frozen=True)
class MaximalFactor:
    """One factor M_point^exponent of an ideal."""

    point: Point
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 1:
            raise ValueError("exponent must be at least 1")


@dataclass(frozen=True)
class Unrepresentable:
    """A generator would need a non-rational point; the factors are reported instead."""

    factors: tuple[MaximalFactor, ...]


IsolationResult = Divisor | ZeroFunction | Undecidable


@dataclass
class Config:
    """Resolved run configuration: command line over config file over defaults."""

    precision_start: int = 53
    precision_cap: int = 1024
    tolerance: Fraction = field(default_factory=lambda: Fraction(1, 2**53))
    multiplicity_cap: int = 16
    output_format: Literal["text", "json"] = "text"
    oracle: bool = False
    workers: int = 1
    debug: bool = False

    def to_params(self) -> IsolationParams:
        """
        Engine-facing subset of the configuration.

        :raises InvalidParamsError: if the values are inconsistent
        """
        return IsolationParams(
            tolerance=self.tolerance,
            precision_start=self.precision_start,
            precision_cap=self.precision_cap,
            multiplicity_cap=self.multiplicity_cap,
            workers=self.workers,
        )
