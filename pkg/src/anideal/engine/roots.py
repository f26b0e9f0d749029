"""
Certified isolation of the zeros of an analytic expression on [0,1].

A segment [a, b] is settled by a derivative count: if f^(m) keeps its sign on
[a, b] then f has at most m zeros there, counted with multiplicity. The
multiplicities at a and b are known exactly (both are rational sample points),
so the remaining budget bounds the interior zeros and the one-sided signs at
a and b give their parity. Segments that cannot be settled are bisected.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from anideal.engine.expr import Const, Expr, denominators, factors, nth_derivative, normalize
from anideal.engine.interval import Interval
from anideal.engine.oracle import from_expr, squarefree_decompose
from anideal.engine.params import DEFAULT_PARAMS, IsolationParams
from anideal.engine.taylor import (
    derivative_enclosures,
    evaluate,
    exact_coeffs,
    exact_value,
    interval_series,
)
from anideal.exceptions import (
    NotAnalyticError,
    PointIdentityUndecidable,
    PrecisionExhausted,
    UndecidableError,
)
from anideal.models import (
    Analytic,
    Divisor,
    DivisorEntry,
    Enclosure,
    ExactRational,
    IsolationResult,
    MultiplicityCertificate,
    NotAnalytic,
    Point,
    Undecidable,
    ZeroFunction,
)
from anideal.utils.logger import logger_setup
from anideal.utils.tools import simplest_between

log = logger_setup(__name__)


@dataclass(frozen=True)
class SamplePoint:
    """
    A rational point with its vanishing order and the sign of the first
    nonzero Taylor coefficient there.
    """

    point: Fraction
    order: int
    sign: int

    @property
    def sign_right(self) -> int:
        """Sign of f just to the right of the point."""
        return self.sign

    @property
    def sign_left(self) -> int:
        """Sign of f just to the left of the point."""
        return self.sign * (-1) ** self.order


class ZeroIsolator:
    """
    Runs the subdivision search for one normalized, structurally nonzero
    expression.
    """

    def __init__(self, f: Expr, params: IsolationParams) -> None:
        self.f = f
        self.params = params
        self.segments = 0

    # --- point samples ------------------------------------------------------

    def coefficient_sign(
        self, g: Expr, q: Fraction, k: int, start: int | None = None
    ) -> int | None:
        """
        Certified sign of the k-th Taylor coefficient of g at q, from interval
        arithmetic along the ladder; None if it stays ambiguous.
        """
        for p in self.params.ladder:
            if start is not None and p < start:
                continue
            try:
                coeff = interval_series(g, Interval.from_rational(q, p), k, p)[k]
            except NotAnalyticError:
                continue
            sign = coeff.sign()
            if sign is not None:
                return sign
        return None

    def sign_at(self, g: Expr, q: Fraction, start: int | None = None) -> int | None:
        """Sign of g(q): exact where substitution allows, else certified by intervals."""
        try:
            value = exact_value(g, q)
        except NotAnalyticError:
            return None
        if value is not None:
            return value.sign()
        return self.coefficient_sign(g, q, 0, start)

    def sample(self, q: Fraction) -> SamplePoint | None:
        """
        Vanishing order and leading sign of f at q.

        :return: None when the sign of f(q) itself cannot be certified
        :raises UndecidableError: when q is a zero whose multiplicity cannot be
            certified within the multiplicity cap
        """
        s0 = self.sign_at(self.f, q)
        if s0 is None:
            return None
        if s0 != 0:
            return SamplePoint(q, 0, s0)
        cap = self.params.multiplicity_cap
        coeffs = exact_coeffs(self.f, q, cap)
        for k in range(1, cap + 1):
            exact = coeffs[k]
            if exact is not None:
                sign: int | None = exact.sign()
            else:
                sign = self.coefficient_sign(self.f, q, k)
            if sign is None:
                raise UndecidableError(
                    (q, q), f"cannot certify the multiplicity of the zero at {q}"
                )
            if sign != 0:
                log.debug("exact zero at %s with multiplicity %s", q, k)
                return SamplePoint(q, k, sign)
        raise UndecidableError(
            (q, q), f"zero at {q} has multiplicity above the cap {cap}"
        )

    @staticmethod
    def vanishes_at(g: Expr, q: Fraction) -> bool:
        """Whether g(q) is exactly zero by substitution."""
        try:
            value = exact_value(g, q)
        except NotAnalyticError:
            return False
        return value is not None and value.is_zero

    def exact_zero_inside(self, g: Expr, lo: Fraction, hi: Fraction) -> Fraction | None:
        """The simplest rational strictly inside (lo, hi), if g vanishes there exactly."""
        if lo >= hi:
            return None
        q = simplest_between(lo, hi)
        return q if self.vanishes_at(g, q) else None

    # --- segment certificates ------------------------------------------------

    def certify(self, lo: Fraction, hi: Fraction, precision: int) -> int | None:
        """
        Least m <= the multiplicity cap with f^(m) bounded away from 0 on [lo, hi].
        """
        box = Interval.from_bounds(lo, hi, precision)
        cap = self.params.multiplicity_cap
        order = min(2, cap)
        while True:
            try:
                bounds = derivative_enclosures(self.f, box, order, precision)
            except NotAnalyticError:
                return None
            for k, bound in enumerate(bounds):
                if bound.excludes_zero():
                    return k
            if order >= cap:
                return None
            order = min(cap, order * 2)

    def split_point(self, a: SamplePoint, b: SamplePoint) -> SamplePoint:
        """
        A sample point strictly inside (a, b): the simplest rational when it is
        an exact zero, otherwise the first of a few dyadic points whose sign
        can be certified.
        """
        lo, hi = a.point, b.point
        simplest = self.exact_zero_inside(self.f, lo, hi)
        if simplest is not None:
            found = self.sample(simplest)
            if found is not None:
                return found
        width = hi - lo
        for fraction in (
            Fraction(1, 2),
            Fraction(3, 8),
            Fraction(5, 8),
            Fraction(1, 4),
            Fraction(3, 4),
        ):
            try:
                found = self.sample(lo + fraction * width)
            except NotAnalyticError:
                continue
            if found is not None:
                return found
        raise UndecidableError((lo, hi), "no split point with a certified sign")

    # --- simple zeros ---------------------------------------------------------

    def newton(
        self, g: Expr, lo: Fraction, hi: Fraction, precision: int
    ) -> tuple[Fraction, Fraction] | None:
        """One interval Newton step on [lo, hi]; None if g' may vanish there."""
        box = Interval.from_bounds(lo, hi, precision)
        try:
            slope = derivative_enclosures(g, box, 1, precision)[1]
            if slope.contains_zero():
                return None
            mid = Interval.from_rational((lo + hi) / 2, precision)
            value = interval_series(g, mid, 0, precision)[0]
        except NotAnalyticError:
            return None
        image = (mid - value / slope).intersect(box)
        if image is None or not image.is_finite:
            return None
        return max(lo, image.lower), min(hi, image.upper)

    def bisect(
        self, g: Expr, lo: Fraction, hi: Fraction, sign_lo: int, precision: int
    ) -> Fraction | tuple[Fraction, Fraction] | None:
        """
        Halve [lo, hi] by the sign of g at an inner point; a Fraction result
        is an exact zero.
        """
        width = hi - lo
        for fraction in (Fraction(1, 2), Fraction(3, 8), Fraction(5, 8)):
            c = lo + fraction * width
            sign = self.sign_at(g, c, precision)
            if sign is None:
                continue
            if sign == 0:
                return c
            return (c, hi) if sign == sign_lo else (lo, c)
        return None

    def contract(
        self,
        g: Expr,
        lo: Fraction,
        hi: Fraction,
        sign_lo: int | None,
        target: Fraction,
    ) -> Fraction | tuple[Fraction, Fraction]:
        """
        Shrink an interval holding exactly one simple zero of g to width
        <= target, or return the zero itself once it is found to be rational.
        """
        precision = self.params.precision_for_width(hi - lo)
        given = {lo, hi}
        while True:
            # endpoints reached by Newton or bisection may be the zero itself
            for endpoint in {lo, hi} - given:
                if self.vanishes_at(g, endpoint):
                    return endpoint
            exact = self.exact_zero_inside(g, lo, hi)
            if exact is not None:
                return exact
            width = hi - lo
            if width <= target:
                return lo, hi
            precision = max(precision, self.params.precision_for_width(width))
            step = self.newton(g, lo, hi, precision)
            if step is not None:
                lo, hi = step
                if hi - lo <= width / 2:
                    continue
            if sign_lo is not None:
                halved = self.bisect(g, lo, hi, sign_lo, precision)
                if isinstance(halved, Fraction):
                    return halved
                if halved is not None:
                    lo, hi = halved
                    continue
            if step is not None and hi - lo < width:
                continue
            raised = self.params.escalate(precision)
            if raised is None:
                raise UndecidableError((lo, hi), "interval did not contract at the precision cap")
            log.debug("contraction stalled, escalating to %s bits", raised)
            precision = raised

    def simple_zero(self, a: SamplePoint, b: SamplePoint) -> DivisorEntry:
        found = self.contract(self.f, a.point, b.point, a.sign_right, self.params.tolerance)
        if isinstance(found, Fraction):
            return DivisorEntry(ExactRational(found), 1)
        lo, hi = found
        return DivisorEntry(Enclosure(lo, hi, 1, self.f), 1)

    # --- search ---------------------------------------------------------------

    def explore(self, left: SamplePoint, right: SamplePoint) -> list[DivisorEntry]:
        """Depth-first search of the open segment between two sample points."""
        entries: list[DivisorEntry] = []
        stack = [(left, right)]
        # the output tolerance does not bound the search depth
        floor = min(self.params.resolution, self.params.tolerance)
        while stack:
            a, b = stack.pop()
            self.segments += 1
            width = b.point - a.point
            m = None
            precision = self.params.precision_for_width(width)
            while True:
                m = self.certify(a.point, b.point, precision)
                if m is not None or width > floor:
                    break
                raised = self.params.escalate(precision)
                if raised is None:
                    break
                precision = raised

            if m is not None:
                budget = m - a.order - b.order
                if budget <= 0:
                    continue
                if budget == 1:
                    if a.sign_right != b.sign_left:
                        entries.append(self.simple_zero(a, b))
                    continue
            if width <= floor:
                reason = (
                    "no derivative of f up to the multiplicity cap is bounded away from 0"
                    if m is None
                    else f"up to {m - a.order - b.order} zeros could not be separated"
                )
                raise UndecidableError((a.point, b.point), reason)
            c = self.split_point(a, b)
            if c.order > 0:
                entries.append(DivisorEntry(ExactRational(c.point), c.order))
            stack.append((c, b))
            stack.append((a, c))
        return entries

    def endpoint(self, q: Fraction) -> SamplePoint:
        found = self.sample(q)
        if found is None:
            raise UndecidableError((q, q), f"sign of f at {q} is not certified")
        return found

    def run(self, lo: Fraction = Fraction(0), hi: Fraction = Fraction(1)) -> Divisor:
        """Complete divisor of f on [lo, hi]."""
        left = self.endpoint(lo)
        entries: list[DivisorEntry] = []
        if left.order:
            entries.append(DivisorEntry(ExactRational(lo), left.order))
        if lo == hi:
            return Divisor(tuple(entries))
        right = self.endpoint(hi)
        if right.order:
            entries.append(DivisorEntry(ExactRational(hi), right.order))

        pieces = [(left, right)]
        while len(pieces) < self.params.workers:
            widest = max(pieces, key=lambda piece: piece[1].point - piece[0].point)
            a, b = widest
            if b.point - a.point <= self.params.tolerance:
                break
            c = self.split_point(a, b)
            if c.order:
                entries.append(DivisorEntry(ExactRational(c.point), c.order))
            index = pieces.index(widest)
            pieces[index : index + 1] = [(a, c), (c, b)]

        if len(pieces) == 1:
            entries.extend(self.explore(left, right))
        else:
            failures: list[UndecidableError] = []
            with ThreadPoolExecutor(max_workers=self.params.workers) as executor:
                future_to_piece = {
                    executor.submit(self.explore, a, b): (a, b) for a, b in pieces
                }
                for future in as_completed(future_to_piece):
                    try:
                        entries.extend(future.result())
                    except UndecidableError as e:
                        failures.append(e)
            if failures:
                raise min(failures, key=lambda e: e.interval)
        log.debug("%s segments examined, %s zeros", self.segments, len(entries))
        return Divisor(tuple(entries))


def _resolve(
    params: IsolationParams | None,
    tolerance: Fraction | None,
    precision_cap: int | None,
) -> IsolationParams:
    params = params or DEFAULT_PARAMS
    if tolerance is not None:
        params = replace(params, tolerance=Fraction(tolerance))
    if precision_cap is not None:
        params = replace(
            params,
            precision_cap=precision_cap,
            precision_start=min(params.precision_start, precision_cap),
        )
    return params


def isolate_zeros(
    f: Expr,
    tolerance: Fraction | None = None,
    precision_cap: int | None = None,
    *,
    params: IsolationParams | None = None,
) -> IsolationResult:
    """
    Complete divisor of f on [0,1].

    :param f: expression that passed check_analytic
    :param tolerance: maximum enclosure width (overrides params)
    :param precision_cap: highest working precision (overrides params)
    :param params: isolation parameters
    :return: the Divisor; ZeroFunction only when f normalizes to the zero
        constant; Undecidable with the unresolved interval otherwise
    """
    params = _resolve(params, tolerance, precision_cap)
    return _isolate(f, params, Fraction(0), Fraction(1))


def isolate_in(
    f: Expr, lo: Fraction, hi: Fraction, params: IsolationParams | None = None
) -> IsolationResult:
    """Divisor of f restricted to [lo, hi] within [0,1]."""
    return _isolate(f, params or DEFAULT_PARAMS, Fraction(lo), Fraction(hi))


def _isolate(
    f: Expr, params: IsolationParams, lo: Fraction, hi: Fraction
) -> IsolationResult:
    g = normalize(f)
    if isinstance(g, Const):
        return ZeroFunction() if g.value == 0 else Divisor()
    try:
        return _divisor_of(g, params, lo, hi)
    except UndecidableError as e:
        log.debug("undecidable: %s", e.reason)
        return Undecidable(e.interval, e.reason)


def _pieces(g: Expr) -> tuple[list[tuple[Expr, int]], bool]:
    """
    Split g into pieces whose divisors add up to the divisor of g.

    A polynomial splits into its square-free parts, which share no zero;
    anything else splits into its structural factors, which may.

    :return: the (piece, power) pairs and whether the pieces are coprime
    """
    p = from_expr(g)
    if p is not None and not p.is_zero:
        parts = squarefree_decompose(p)
        if len(parts) > 1 or (parts and parts[0][1] > 1):
            return [(part.to_expr(), k) for part, k in parts], True
        return [(g, 1)], True
    found = factors(g)
    return [(normalize(h), k) for h, k in found.items()], False


def _divisor_of(g: Expr, params: IsolationParams, lo: Fraction, hi: Fraction) -> Divisor:
    """
    Divisor of the normalized, nonconstant g on [lo, hi].

    :raises UndecidableError: when a piece cannot be isolated, or zeros of two
        factors can be neither merged nor separated
    """
    pieces, coprime = _pieces(g)
    if pieces == [(g, 1)] or not pieces:
        return ZeroIsolator(g, params).run(lo, hi)

    # imported here: ideals builds on this module
    from anideal.engine.ideals import add_divisors

    log.debug("isolating %s pieces of %s", len(pieces), g)
    total = Divisor()
    for piece, power in pieces:
        if isinstance(piece, Const):
            continue
        part = _divisor_of(piece, params, lo, hi)
        scaled = Divisor(
            tuple(DivisorEntry(e.point, e.multiplicity * power) for e in part)
        )
        if coprime:
            total = Divisor(total.entries + scaled.entries)
            continue
        try:
            total = add_divisors(total, scaled, params)
        except PointIdentityUndecidable as e:
            interval = (
                min(e.left.lower, e.right.lower),
                max(e.left.upper, e.right.upper),
            )
            raise UndecidableError(interval, str(e)) from e
    return total


def sign_at(
    f: Expr, q: Fraction, params: IsolationParams | None = None
) -> int | None:
    """
    Sign of f(q) as -1, 0 or +1, or None when it cannot be certified.
    """
    g = normalize(f)
    return ZeroIsolator(g, params or DEFAULT_PARAMS).sign_at(g, Fraction(q))


@lru_cache(maxsize=256)
def _denominator_verdict(d: Expr, params: IsolationParams) -> Analytic | NotAnalytic:
    try:
        box = Interval.unit(params.precision_start)
        if evaluate(d, box, params.precision_start, params.precision_cap).excludes_zero():
            return Analytic()
    except NotAnalyticError:
        pass
    try:
        result = isolate_zeros(d, params=params)
    except NotAnalyticError as e:
        return NotAnalytic(e.witness, d)
    match result:
        case ZeroFunction():
            return NotAnalytic((Fraction(0), Fraction(1)), d)
        case Undecidable(interval=interval):
            return NotAnalytic(interval, d)
        case Divisor() if not result.is_empty:
            first = result.entries[0].point
            return NotAnalytic((first.lower, first.upper), d)
    return Analytic()


def check_analytic(
    f: Expr, params: IsolationParams | None = None
) -> Analytic | NotAnalytic:
    """
    Analytic iff every denominator is zero-free on [0,1], checked innermost first.
    """
    params = params or DEFAULT_PARAMS
    for d in denominators(normalize(f)):
        verdict = _denominator_verdict(d, params)
        if isinstance(verdict, NotAnalytic):
            log.debug("%s", verdict)
            return verdict
    return Analytic()


def multiplicity(
    f: Expr,
    candidate: Interval | tuple[Fraction, Fraction],
    precision: int | None = None,
    params: IsolationParams | None = None,
) -> MultiplicityCertificate | Undecidable:
    """
    Multiplicity of the single zero of f in the candidate interval.

    The candidate is isolated on its own; the certificate's interval is the
    resulting point. A multiple zero at an irrational point is certified
    through the square-free part of a polynomial or through a repeated
    structural factor.

    :return: Undecidable when the candidate holds no zero or several, or a
        multiple irrational zero has neither of those certificates
    """
    params = params or DEFAULT_PARAMS
    if precision is not None and precision in params.ladder:
        params = replace(params, precision_start=precision)
    if isinstance(candidate, Interval):
        lo, hi = candidate.lower, candidate.upper
    else:
        lo, hi = Fraction(candidate[0]), Fraction(candidate[1])
    lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
    result = isolate_in(f, lo, hi, params)
    match result:
        case Undecidable():
            return result
        case ZeroFunction():
            return Undecidable((lo, hi), "the zero function has no finite multiplicity")
    assert isinstance(result, Divisor)
    if len(result) != 1:
        return Undecidable((lo, hi), f"candidate holds {len(result)} zeros")
    entry = result.entries[0]
    point = entry.point
    exact = point.value if isinstance(point, ExactRational) else None
    return MultiplicityCertificate(entry.multiplicity, point.lower, point.upper, exact)


def refine(
    p: Point, f: Expr, target: Fraction, params: IsolationParams | None = None
) -> Point:
    """
    Narrow a certified enclosure of a zero of f to width <= target.

    Works on h^(m-1), where h is the enclosure's certifying function and m its
    multiplicity there, so the zero is simple; a rational zero found on the
    way is returned exactly.

    :raises PrecisionExhausted: if target is below 2^-(precision cap)
    """
    params = params or DEFAULT_PARAMS
    if isinstance(p, ExactRational):
        return p
    if target < Fraction(1, 2**params.precision_cap):
        raise PrecisionExhausted(
            f"target width {float(target):.3g} is below 2^-{params.precision_cap}"
        )
    if p.width <= target:
        return p
    # the enclosure certifies a zero of its own function, a factor of f
    g = nth_derivative(p.function, p.multiplicity - 1)
    isolator = ZeroIsolator(g, params)
    sign_lo = isolator.sign_at(g, p.lo)
    sign_hi = isolator.sign_at(g, p.hi)
    if sign_lo == 0:
        return ExactRational(p.lo)
    if sign_hi == 0:
        return ExactRational(p.hi)
    if sign_lo is None and sign_hi is not None:
        sign_lo = -sign_hi
    try:
        found = isolator.contract(g, p.lo, p.hi, sign_lo, target)
    except UndecidableError as e:
        raise PrecisionExhausted(str(e)) from e
    if isinstance(found, Fraction):
        return ExactRational(found)
    lo, hi = found
    return Enclosure(lo, hi, p.multiplicity, p.function)


def vanishes_to_order(
    f: Expr, q: Fraction, m: int, params: IsolationParams | None = None
) -> bool | None:
    """
    True when f and its first m-1 derivatives vanish at the rational q, False
    when one of them is certified nonzero, None when a sign stays ambiguous.
    """
    g = normalize(f)
    if isinstance(g, Const) and g.value == 0:
        return True
    isolator = ZeroIsolator(g, params or DEFAULT_PARAMS)
    q = Fraction(q)
    try:
        coeffs = exact_coeffs(g, q, m - 1)
    except NotAnalyticError:
        return None
    for k, exact in enumerate(coeffs):
        sign = exact.sign() if exact is not None else isolator.coefficient_sign(g, q, k)
        if sign is None:
            return None
        if sign != 0:
            return False
    return True
