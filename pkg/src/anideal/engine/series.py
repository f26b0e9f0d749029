"""
Recursive Taylor arithmetic over an expression tree.

The same recurrences run over two scalar fields: outward-rounded intervals,
and exact values of the form a + b*pi (with "unknown" for anything else).
Coefficient n of a series is f^(n)(c)/n! at the expansion center c.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Generic, Protocol, TypeVar

from anideal.engine.expr import (
    Add,
    Const,
    Cos,
    Cosh,
    Div,
    Exp,
    Expr,
    IntPow,
    Mul,
    Neg,
    PiConst,
    Sin,
    Sinh,
    Sub,
    Var,
)
from anideal.engine.interval import Interval
from anideal.exceptions import NotAnalyticError
from anideal.utils.logger import logger_setup

log = logger_setup(__name__)

T = TypeVar("T")


class ScalarField(Protocol[T]):
    """
    A protocol that defines the scalar operations the series recurrences need.
    """

    def constant(self, q: Fraction) -> T: ...

    def pi(self) -> T: ...

    def add(self, a: T, b: T) -> T: ...

    def sub(self, a: T, b: T) -> T: ...

    def mul(self, a: T, b: T) -> T: ...

    def div(self, a: T, b: T) -> T:
        """
        :raises ZeroDivisionError: when b is (or may be) zero
        """
        ...

    def neg(self, a: T) -> T: ...

    def scale(self, a: T, q: Fraction) -> T: ...

    def exp(self, a: T) -> T: ...

    def sin(self, a: T) -> T: ...

    def cos(self, a: T) -> T: ...

    def sinh(self, a: T) -> T: ...

    def cosh(self, a: T) -> T: ...


class IntervalField:
    """Outward-rounded interval scalars at a fixed working precision."""

    def __init__(self, precision: int) -> None:
        self.precision = precision
        self._pi: Interval | None = None

    def constant(self, q: Fraction) -> Interval:
        return Interval.from_rational(q, self.precision)

    def pi(self) -> Interval:
        if self._pi is None:
            self._pi = Interval.pi(self.precision)
        return self._pi

    def add(self, a: Interval, b: Interval) -> Interval:
        return a + b

    def sub(self, a: Interval, b: Interval) -> Interval:
        return a - b

    def mul(self, a: Interval, b: Interval) -> Interval:
        return a * b

    def div(self, a: Interval, b: Interval) -> Interval:
        return a / b

    def neg(self, a: Interval) -> Interval:
        return -a

    def scale(self, a: Interval, q: Fraction) -> Interval:
        return a.scale(q)

    def exp(self, a: Interval) -> Interval:
        return a.exp()

    def sin(self, a: Interval) -> Interval:
        return a.sin()

    def cos(self, a: Interval) -> Interval:
        return a.cos()

    def sinh(self, a: Interval) -> Interval:
        return a.sinh()

    def cosh(self, a: Interval) -> Interval:
        return a.cosh()


@dataclass(frozen=True)
class PiLinear:
    """The exact real number rational + pi_coeff * pi."""

    rational: Fraction
    pi_coeff: Fraction = Fraction(0)

    @property
    def is_zero(self) -> bool:
        # pi is irrational, so a + b*pi vanishes only when a = b = 0
        return self.rational == 0 and self.pi_coeff == 0

    def enclose(self, precision: int) -> Interval:
        value = Interval.from_rational(self.rational, precision)
        if self.pi_coeff:
            value = value + Interval.pi(precision).scale(self.pi_coeff)
        return value

    def sign(self, precision_ladder: tuple[int, ...] = (53, 128, 256, 512, 1024)) -> int:
        """Sign of a nonzero value; always decidable."""
        if self.is_zero:
            return 0
        if self.pi_coeff == 0:
            return 1 if self.rational > 0 else -1
        for precision in precision_ladder:
            sign = self.enclose(precision).sign()
            if sign:
                return sign
        raise ArithmeticError(f"sign of {self} not resolved")  # pragma: no cover

    def __str__(self) -> str:
        if self.pi_coeff == 0:
            return str(self.rational)
        pi_part = "pi" if self.pi_coeff == 1 else f"{self.pi_coeff}*pi"
        if self.rational == 0:
            return pi_part
        return f"{self.rational} + {pi_part}"


Exact = PiLinear | None
EXACT_ZERO = PiLinear(Fraction(0))
EXACT_ONE = PiLinear(Fraction(1))

# sin(k*pi/6) for k = 0..11; None where the value is irrational
_SIN_SIXTHS: tuple[Fraction | None, ...] = (
    Fraction(0),
    Fraction(1, 2),
    None,
    Fraction(1),
    None,
    Fraction(1, 2),
    Fraction(0),
    Fraction(-1, 2),
    None,
    Fraction(-1),
    None,
    Fraction(-1, 2),
)


def _sixths(a: PiLinear) -> int | None:
    if a.rational != 0:
        return None
    k = a.pi_coeff * 6
    if k.denominator != 1:
        return None
    return int(k) % 12


class ExactField:
    """
    Exact scalars a + b*pi; None stands for a real number with no exact form.

    Multiplication by an exact zero is exact even when the other factor is
    unknown, which is what lets substitution certify zeros of products.
    """

    def constant(self, q: Fraction) -> Exact:
        return PiLinear(Fraction(q))

    def pi(self) -> Exact:
        return PiLinear(Fraction(0), Fraction(1))

    def add(self, a: Exact, b: Exact) -> Exact:
        if a is None or b is None:
            return None
        return PiLinear(a.rational + b.rational, a.pi_coeff + b.pi_coeff)

    def sub(self, a: Exact, b: Exact) -> Exact:
        if a is None or b is None:
            return None
        return PiLinear(a.rational - b.rational, a.pi_coeff - b.pi_coeff)

    def neg(self, a: Exact) -> Exact:
        if a is None:
            return None
        return PiLinear(-a.rational, -a.pi_coeff)

    def mul(self, a: Exact, b: Exact) -> Exact:
        if (a is not None and a.is_zero) or (b is not None and b.is_zero):
            return EXACT_ZERO
        if a is None or b is None:
            return None
        if a.pi_coeff == 0:
            return self.scale(b, a.rational)
        if b.pi_coeff == 0:
            return self.scale(a, b.rational)
        return None

    def div(self, a: Exact, b: Exact) -> Exact:
        if b is not None and b.is_zero:
            raise ZeroDivisionError("exact division by zero")
        if a is not None and a.is_zero:
            return EXACT_ZERO
        if a is None or b is None or b.pi_coeff != 0:
            return None
        return self.scale(a, 1 / b.rational)

    def scale(self, a: Exact, q: Fraction) -> Exact:
        if a is None:
            return EXACT_ZERO if q == 0 else None
        return PiLinear(a.rational * q, a.pi_coeff * q)

    def exp(self, a: Exact) -> Exact:
        return EXACT_ONE if a is not None and a.is_zero else None

    def sinh(self, a: Exact) -> Exact:
        return EXACT_ZERO if a is not None and a.is_zero else None

    def cosh(self, a: Exact) -> Exact:
        return EXACT_ONE if a is not None and a.is_zero else None

    def sin(self, a: Exact) -> Exact:
        if a is None:
            return None
        k = _sixths(a)
        if k is None:
            return None
        value = _SIN_SIXTHS[k]
        return None if value is None else PiLinear(value)

    def cos(self, a: Exact) -> Exact:
        if a is None:
            return None
        k = _sixths(a)
        if k is None:
            return None
        value = _SIN_SIXTHS[(k + 3) % 12]
        return None if value is None else PiLinear(value)


class SeriesEvaluator(Generic[T]):
    """
    Truncated Taylor series of expression nodes around one center.

    Results are memoized per node, so shared subtrees are expanded once.
    """

    def __init__(
        self,
        field: ScalarField[T],
        center: T,
        order: int,
        witness: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1)),
    ) -> None:
        if order < 0:
            raise ValueError("order must be nonnegative")
        self.field = field
        self.center = center
        self.order = order
        self.witness = witness
        self._cache: dict[Expr, list[T]] = {}
        self._zero = field.constant(Fraction(0))
        self._one = field.constant(Fraction(1))

    def series(self, node: Expr) -> list[T]:
        cached = self._cache.get(node)
        if cached is None:
            cached = self._expand(node)
            self._cache[node] = cached
        return cached

    def _constant_series(self, value: T) -> list[T]:
        return [value] + [self._zero] * self.order

    def _expand(self, node: Expr) -> list[T]:
        F = self.field
        match node:
            case Const(value=value):
                return self._constant_series(F.constant(value))
            case PiConst():
                return self._constant_series(F.pi())
            case Var():
                tail = [self._one] + [self._zero] * (self.order - 1)
                return [self.center] + tail[: self.order]
            case Neg(arg=arg):
                return [F.neg(a) for a in self.series(arg)]
            case Add(left=left, right=right):
                return [F.add(a, b) for a, b in zip(self.series(left), self.series(right))]
            case Sub(left=left, right=right):
                return [F.sub(a, b) for a, b in zip(self.series(left), self.series(right))]
            case Mul(left=left, right=right):
                return self._mul(self.series(left), self.series(right))
            case Div(left=left, right=right):
                return self._div(self.series(left), self.series(right))
            case IntPow(base=base, exponent=exponent):
                return self._pow(self.series(base), exponent)
            case Exp(arg=arg):
                return self._exp(self.series(arg))
            case Sin(arg=arg):
                return self._sin_cos(self.series(arg), F.sin, F.cos, -1)[0]
            case Cos(arg=arg):
                return self._sin_cos(self.series(arg), F.sin, F.cos, -1)[1]
            case Sinh(arg=arg):
                return self._sin_cos(self.series(arg), F.sinh, F.cosh, 1)[0]
            case Cosh(arg=arg):
                return self._sin_cos(self.series(arg), F.sinh, F.cosh, 1)[1]
        raise TypeError(f"unknown expression node {node!r}")

    def _sum(self, terms: list[T]) -> T:
        total = self._zero
        for term in terms:
            total = self.field.add(total, term)
        return total

    def _mul(self, a: list[T], b: list[T]) -> list[T]:
        F = self.field
        return [
            self._sum([F.mul(a[k], b[n - k]) for k in range(n + 1)])
            for n in range(self.order + 1)
        ]

    def _div(self, a: list[T], b: list[T]) -> list[T]:
        F = self.field
        quotient: list[T] = []
        for n in range(self.order + 1):
            acc = a[n]
            for k in range(1, n + 1):
                acc = F.sub(acc, F.mul(b[k], quotient[n - k]))
            try:
                quotient.append(F.div(acc, b[0]))
            except ZeroDivisionError as e:
                raise NotAnalyticError(self.witness) from e
        return quotient

    def _pow(self, base: list[T], exponent: int) -> list[T]:
        result = self._constant_series(self._one)
        square = base
        while exponent:
            if exponent & 1:
                result = self._mul(result, square)
            exponent >>= 1
            if exponent:
                square = self._mul(square, square)
        return result

    def _exp(self, u: list[T]) -> list[T]:
        F = self.field
        e = [F.exp(u[0])]
        for n in range(1, self.order + 1):
            e.append(
                self._sum([F.scale(F.mul(u[k], e[n - k]), Fraction(k, n)) for k in range(1, n + 1)])
            )
        return e

    def _sin_cos(
        self,
        u: list[T],
        odd: Callable[[T], T],
        even: Callable[[T], T],
        sign: int,
    ) -> tuple[list[T], list[T]]:
        """
        Coupled recurrences s' = u' c, c' = sign * u' s; sign -1 gives sin/cos
        and +1 gives sinh/cosh.
        """
        F = self.field
        s = [odd(u[0])]
        c = [even(u[0])]
        for n in range(1, self.order + 1):
            s.append(
                self._sum([F.scale(F.mul(u[k], c[n - k]), Fraction(k, n)) for k in range(1, n + 1)])
            )
            c.append(
                self._sum(
                    [F.scale(F.mul(u[k], s[n - k]), Fraction(sign * k, n)) for k in range(1, n + 1)]
                )
            )
        return s, c
