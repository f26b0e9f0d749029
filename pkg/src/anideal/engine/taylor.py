"""
Rigorous Taylor coefficients, Taylor models and interval evaluation.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TypeVar

from anideal.engine.expr import Expr
from anideal.engine.interval import Interval
from anideal.engine.params import PRECISION_LADDER
from anideal.engine.series import (
    ExactField,
    IntervalField,
    PiLinear,
    SeriesEvaluator,
)
from anideal.exceptions import NotAnalyticError
from anideal.models import Enclosure, ExactRational
from anideal.utils.logger import logger_setup

log = logger_setup(__name__)

T = TypeVar("T")

Center = Fraction | int | Interval | ExactRational | Enclosure


@dataclass(frozen=True)
class TaylorModel:
    """
    Order-N polynomial in (x - center) plus an interval remainder valid on
    the whole domain.
    """

    center: Center
    order: int
    coeffs: tuple[Interval, ...]
    domain: Interval
    remainder: Interval

    def polynomial(self, at: Interval) -> Interval:
        """Horner evaluation of the polynomial part over `at`."""
        shift = at - _center_interval(self.center, at.precision)
        value = self.coeffs[-1]
        for coeff in reversed(self.coeffs[:-1]):
            value = value * shift + coeff
        return value

    def enclose(self, at: Interval) -> Interval:
        """
        Enclosure of f over a sub-domain.

        :param at: interval inside the model's domain
        :return: polynomial part over `at` widened by the remainder
        """
        if not at.subset_of(self.domain):
            raise ValueError(f"{at} is not inside the model domain {self.domain}")
        return self.polynomial(at) + self.remainder


def _center_interval(center: Center, precision: int) -> Interval:
    match center:
        case Interval():
            return center.at_precision(max(precision, center.precision))
        case ExactRational(value=value):
            return Interval.from_rational(value, precision)
        case Enclosure(lo=lo, hi=hi):
            return Interval.from_bounds(lo, hi, precision)
        case _:
            return Interval.from_rational(Fraction(center), precision)


def _witness(center: Interval) -> tuple[Fraction, Fraction]:
    if not center.is_finite:
        return (Fraction(0), Fraction(1))
    return (center.lower, center.upper)


def _ladder_from(precision: int, cap: int) -> tuple[int, ...]:
    rungs = tuple(p for p in PRECISION_LADDER if precision <= p <= cap)
    return rungs or (precision,)


def interval_series(
    f: Expr, center: Interval, order: int, precision: int
) -> list[Interval]:
    """One pass of interval Taylor arithmetic, no escalation."""
    point = center.at_precision(precision)
    evaluator = SeriesEvaluator(IntervalField(precision), point, order, _witness(point))
    return evaluator.series(f)


def taylor_coeffs(
    f: Expr,
    center: Center,
    order: int,
    precision: int,
    precision_cap: int = PRECISION_LADDER[-1],
) -> list[Interval]:
    """
    Enclosures of f^(n)(center)/n! for n = 0..order.

    :param f: analytic expression
    :param center: expansion point
    :param order: highest coefficient index
    :param precision: starting working precision; raised along the ladder
        while a denominator cannot be separated from 0
    :param precision_cap: highest precision tried
    :raises NotAnalyticError: if the cap is reached with a denominator
        still possibly zero at the center
    """
    error: NotAnalyticError | None = None
    for p in _ladder_from(precision, precision_cap):
        try:
            return interval_series(f, _center_interval(center, p), order, p)
        except NotAnalyticError as e:
            log.debug("denominator not separated from 0 at %s bits", p)
            error = e
    assert error is not None
    raise error


def exact_coeffs(f: Expr, q: Fraction | int, order: int) -> list[PiLinear | None]:
    """
    Exact Taylor coefficients at a rational point, where they have the form
    a + b*pi; None marks a coefficient without such a form.

    :raises NotAnalyticError: if a denominator vanishes exactly at q
    """
    q = Fraction(q)
    evaluator = SeriesEvaluator(ExactField(), PiLinear(q), order, (q, q))
    return evaluator.series(f)


def exact_value(f: Expr, q: Fraction | int) -> PiLinear | None:
    return exact_coeffs(f, q, 0)[0]


def deflate(coeffs: Sequence[T]) -> list[T]:
    """
    Coefficients of (f(x) - f(c))/(x - c) at c: the shift a_n -> a_(n+1).

    :raises ValueError: for fewer than two coefficients
    """
    if len(coeffs) < 2:
        raise ValueError("deflation needs at least two coefficients")
    return list(coeffs[1:])


def domination_check(f_coeffs: Sequence[Interval], g_coeffs: Sequence[Interval]) -> bool:
    """
    True iff every |g_n| is bounded by (n+1)|f_(n+1)|, with 2^-p relative slack.
    """
    if len(g_coeffs) != len(f_coeffs) - 1:
        return False
    for n, g in enumerate(g_coeffs):
        f = f_coeffs[n + 1]
        slack = 1 + Fraction(1, 2 ** max(f.precision, g.precision))
        if not f.is_finite or not g.is_finite:
            return False
        if g.magnitude() > (n + 1) * f.magnitude() * slack:
            return False
    return True


def evaluate(
    f: Expr,
    at: Interval | Fraction | int,
    precision: int,
    precision_cap: int = PRECISION_LADDER[-1],
) -> Interval:
    """
    Enclosure of { f(x) : x in at }.

    A rational point with an exact value (polynomials, and a + b*pi values)
    yields the tightest enclosure of that value.

    :raises NotAnalyticError: as for taylor_coeffs
    """
    if not isinstance(at, Interval):
        q = Fraction(at)
        exact = exact_value(f, q)
        if exact is not None:
            return exact.enclose(precision)
        return taylor_coeffs(f, q, 0, precision, precision_cap)[0]
    if at.is_point:
        return evaluate(f, at.lower, precision, precision_cap)

    error: NotAnalyticError | None = None
    for p in _ladder_from(precision, precision_cap):
        try:
            domain = at.at_precision(p)
            naive, slope = interval_series(f, domain, 1, p)
            mid = Interval.from_rational(domain.midpoint, p)
            centered = interval_series(f, mid, 0, p)[0] + slope * (domain - mid)
            return naive.intersect(centered) or naive
        except NotAnalyticError as e:
            error = e
    assert error is not None
    raise error


def derivative_enclosures(
    f: Expr, domain: Interval, order: int, precision: int
) -> list[Interval]:
    """
    Enclosures of f^(k)(x)/k! over the domain for k = 0..order.

    Each is the naive interval Taylor coefficient intersected with the
    mean-value form around the domain midpoint.

    :raises NotAnalyticError: when a denominator is not separated from 0
    """
    box = domain.at_precision(precision)
    naive = interval_series(f, box, order + 1, precision)
    mid = Interval.from_rational(box.midpoint, precision)
    at_mid = interval_series(f, mid, order + 1, precision)
    offset = box - mid
    result = []
    for k in range(order + 1):
        centered = at_mid[k] + naive[k + 1].scale(k + 1) * offset
        result.append(naive[k].intersect(centered) or naive[k])
    return result


def taylor_model(
    f: Expr, domain: Interval, center: Center, order: int, precision: int
) -> TaylorModel:
    """
    Taylor model of f on the domain with a Lagrange remainder.

    :raises NotAnalyticError: when a denominator may vanish on the domain
    """
    c = _center_interval(center, precision)
    if not c.subset_of(domain):
        raise ValueError("the center must lie in the domain")
    coeffs = taylor_coeffs(f, center, order, precision)
    box = domain.at_precision(precision)
    top = interval_series(f, box, order + 1, precision)[order + 1]
    remainder = top * (box - c) ** (order + 1)
    log.debug("taylor model of order %s, remainder %s", order, remainder)
    return TaylorModel(center, order, tuple(coeffs), box, remainder)
