from dataclasses import dataclass
from fractions import Fraction

from anideal.exceptions import InvalidParamsError

PRECISION_LADDER: tuple[int, ...] = (53, 128, 256, 512, 1024)
GUARD_BITS = 32


@dataclass(frozen=True)
class IsolationParams:
    """Knobs shared by every tri-state engine operation."""

    tolerance: Fraction = Fraction(1, 2**53)
    precision_start: int = 53
    precision_cap: int = 1024
    multiplicity_cap: int = 16
    workers: int = 1

    def __post_init__(self) -> None:
        if self.precision_start not in PRECISION_LADDER:
            raise InvalidParamsError(
                f"precision {self.precision_start} is not one of {PRECISION_LADDER}"
            )
        if self.precision_cap not in PRECISION_LADDER:
            raise InvalidParamsError(
                f"precision cap {self.precision_cap} is not one of {PRECISION_LADDER}"
            )
        if self.precision_start > self.precision_cap:
            raise InvalidParamsError(
                f"precision {self.precision_start} exceeds cap {self.precision_cap}"
            )
        if self.tolerance <= 0:
            raise InvalidParamsError("tolerance must be positive")
        if self.multiplicity_cap < 1:
            raise InvalidParamsError("multiplicity cap must be at least 1")
        if self.workers < 1:
            raise InvalidParamsError("workers must be at least 1")

    @property
    def ladder(self) -> tuple[int, ...]:
        """The working precisions tried, in order."""
        return tuple(
            p for p in PRECISION_LADDER if self.precision_start <= p <= self.precision_cap
        )

    def escalate(self, precision: int) -> int | None:
        """
        Next rung above the given precision, or None at the cap.

        :param precision: current working precision in bits
        :return: the next ladder precision
        """
        for p in self.ladder:
            if p > precision:
                return p
        return None

    @property
    def resolution(self) -> Fraction:
        """Narrowest segment width the precision cap still resolves with guard bits."""
        return Fraction(1, 2 ** (self.precision_cap - GUARD_BITS))

    def precision_for_width(self, width: Fraction) -> int:
        """
        Smallest ladder precision that leaves a comfortable number of guard bits
        for an interval of the given width.
        """
        needed = GUARD_BITS
        if width > 0:
            needed += max(0, width.denominator.bit_length() - width.numerator.bit_length())
        for p in self.ladder:
            if p >= needed:
                return p
        return self.precision_cap


DEFAULT_PARAMS = IsolationParams()
