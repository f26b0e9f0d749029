"""
Ideals of the ring of real-analytic functions on [0,1].

Every ideal of the ring is principal, generated by a function whose zeros on
[0,1] are finite in number, so an ideal is determined by its divisor and all
of the algebra below is divisor algebra.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from anideal.engine.expr import Const, Expr, Mul, Sub, X, IntPow, factors, normalize
from anideal.engine.interval import Interval
from anideal.engine.oracle import from_expr, poly_gcd, sturm_count
from anideal.engine.params import DEFAULT_PARAMS, IsolationParams
from anideal.engine.roots import (
    check_analytic,
    isolate_in,
    isolate_zeros,
    refine,
    sign_at,
    vanishes_to_order,
)
from anideal.engine.taylor import derivative_enclosures
from anideal.exceptions import (
    NotAnalyticError,
    PointIdentityUndecidable,
    PrecisionExhausted,
    ZeroDivisorArgument,
    ZeroIdealNotFactorable,
)
from anideal.models import (
    Divisor,
    DivisorEntry,
    Enclosure,
    ExactRational,
    MaximalFactor,
    NotAnalytic,
    Point,
    Undecidable,
    Unrepresentable,
    ZeroFunction,
)
from anideal.utils.logger import logger_setup

log = logger_setup(__name__)

# refinement shrinks an enclosure by this factor per identity round
_REFINE_FACTOR = Fraction(1, 2**32)


@dataclass(frozen=True)
class ZeroIdeal:
    """The ideal {0}."""

    def __str__(self) -> str:
        return "<0>"


@dataclass(frozen=True, eq=False)
class PrincipalIdeal:
    """
    The ideal of all functions vanishing on `divisor` with at least the
    listed multiplicities. `generator` is informational only.
    """

    divisor: Divisor = field(default_factory=Divisor)
    generator: Expr | None = None

    @property
    def is_unit(self) -> bool:
        return self.divisor.is_empty

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ZeroIdeal):
            return False
        if not isinstance(other, PrincipalIdeal):
            return NotImplemented
        return same_ideal(self, other)

    def __hash__(self) -> int:
        return hash(self.divisor.degree)

    def __str__(self) -> str:
        if self.is_unit:
            return "<1>"
        return " * ".join(
            f"M_{e.point}" + (f"^{e.multiplicity}" if e.multiplicity > 1 else "")
            for e in self.divisor
        )


Ideal = ZeroIdeal | PrincipalIdeal


# --- construction ---------------------------------------------------------------


def unit_ideal() -> PrincipalIdeal:
    return PrincipalIdeal(Divisor(), Const(Fraction(1)))


def maximal_ideal(point: Point | Fraction | int) -> PrincipalIdeal:
    """The maximal ideal of functions vanishing at one point of [0,1]."""
    if not isinstance(point, ExactRational | Enclosure):
        point = ExactRational(Fraction(point))
    generator = _linear_factor(point.value) if isinstance(point, ExactRational) else None
    return PrincipalIdeal(Divisor((DivisorEntry(point, 1),)), generator)


def from_generator(
    f: Expr, params: IsolationParams | None = None
) -> Ideal | Undecidable:
    """
    The ideal generated by f.

    :raises NotAnalyticError: if f is not analytic on [0,1]
    """
    params = params or DEFAULT_PARAMS
    verdict = check_analytic(f, params)
    if isinstance(verdict, NotAnalytic):
        raise NotAnalyticError(verdict.witness, str(verdict))
    result = isolate_zeros(f, params=params)
    match result:
        case ZeroFunction():
            return ZeroIdeal()
        case Undecidable():
            return result
    assert isinstance(result, Divisor)
    return PrincipalIdeal(result, f)


# --- point identity ---------------------------------------------------------------


def _rational_in_enclosure(
    q: Fraction, enclosure: Enclosure, params: IsolationParams
) -> bool:
    original = enclosure
    current: Point = enclosure
    while isinstance(current, Enclosure):
        if not current.contains(q):
            return False
        sign = sign_at(current.function, q, params)
        if sign is not None:
            return sign == 0
        try:
            current = refine(current, current.function, current.width * _REFINE_FACTOR, params)
        except PrecisionExhausted as e:
            raise PointIdentityUndecidable(ExactRational(q), original) from e
    return current.value == q


def _polynomial_identity(a: Enclosure, b: Enclosure) -> bool | None:
    """Decide identity through the exact gcd when both functions are polynomials."""
    p, q = from_expr(a.function), from_expr(b.function)
    if p is None or q is None or p.is_zero or q.is_zero:
        return None
    common = poly_gcd(p, q)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi or common.degree < 1:
        return False
    return common(lo) == 0 or sturm_count(common, lo, hi) > 0


def _hull_certifies(a: Enclosure, b: Enclosure, params: IsolationParams) -> bool:
    """
    True when a's function has no zero in the hull besides a's own and every
    zero of b's function is a zero of a's function.
    """
    if a.function != b.function and not set(factors(b.function)) <= set(
        factors(a.function)
    ):
        return False
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    m = a.multiplicity
    start = params.precision_for_width(hi - lo)
    for p in params.ladder:
        if p < start:
            continue
        try:
            bound = derivative_enclosures(a.function, Interval.from_bounds(lo, hi, p), m, p)[m]
        except NotAnalyticError:
            return False
        if bound.excludes_zero():
            return True
    return False


def _same_enclosure(a: Enclosure, b: Enclosure, params: IsolationParams) -> bool:
    originals = (a, b)
    while True:
        if a == b:
            return True
        if a.hi < b.lo or b.hi < a.lo:
            return False
        exact = _polynomial_identity(a, b)
        if exact is not None:
            return exact
        if _hull_certifies(a, b, params) or _hull_certifies(b, a, params):
            return True
        log.debug("refining overlapping enclosures %s and %s", a, b)
        target = max(a.width, b.width) * _REFINE_FACTOR
        try:
            left = refine(a, a.function, target, params)
            right = refine(b, b.function, target, params)
        except PrecisionExhausted as e:
            raise PointIdentityUndecidable(*originals) from e
        if isinstance(left, Enclosure) and isinstance(right, Enclosure):
            a, b = left, right
            continue
        return same_point(left, right, params)


def same_point(p: Point, q: Point, params: IsolationParams | None = None) -> bool:
    """
    Whether two certified points are the same point of [0,1].

    :raises PointIdentityUndecidable: when refinement down to the precision cap
        can neither separate nor merge them
    """
    params = params or DEFAULT_PARAMS
    match p, q:
        case ExactRational(), ExactRational():
            return p.value == q.value
        case ExactRational(), Enclosure():
            return _rational_in_enclosure(p.value, q, params)
        case Enclosure(), ExactRational():
            return _rational_in_enclosure(q.value, p, params)
    assert isinstance(p, Enclosure) and isinstance(q, Enclosure)
    return _same_enclosure(p, q, params)


# --- divisor algebra ---------------------------------------------------------------


def _sharper(p: Point, q: Point) -> Point:
    if isinstance(p, ExactRational):
        return p
    if isinstance(q, ExactRational):
        return q
    return p if p.width <= q.width else q


def _match(
    left: Divisor, right: Divisor, params: IsolationParams
) -> list[tuple[Point, int, int]]:
    """Every point of either divisor with its multiplicity in each."""
    rows: list[tuple[Point, int, int]] = []
    used: set[int] = set()
    for entry in left:
        partner = None
        for j, other in enumerate(right.entries):
            if j in used:
                continue
            if other.point.upper < entry.point.lower or entry.point.upper < other.point.lower:
                continue
            if same_point(entry.point, other.point, params):
                partner = j
                break
        if partner is None:
            rows.append((entry.point, entry.multiplicity, 0))
        else:
            used.add(partner)
            other = right.entries[partner]
            rows.append(
                (_sharper(entry.point, other.point), entry.multiplicity, other.multiplicity)
            )
    for j, other in enumerate(right.entries):
        if j not in used:
            rows.append((other.point, 0, other.multiplicity))
    return rows


def _combine(
    left: Divisor,
    right: Divisor,
    rule: Callable[[int, int], int],
    params: IsolationParams,
) -> Divisor:
    entries = []
    for point, m, n in _match(left, right, params):
        k = rule(m, n)
        if k > 0:
            entries.append(DivisorEntry(point, k))
    return Divisor(tuple(entries))


def add_divisors(
    left: Divisor, right: Divisor, params: IsolationParams | None = None
) -> Divisor:
    """Sum of two divisors, merging points that are the same point of [0,1]."""
    return _combine(left, right, lambda m, n: m + n, params or DEFAULT_PARAMS)


def _product_generator(a: Expr | None, b: Expr | None) -> Expr | None:
    if a is None or b is None:
        return None
    return normalize(Mul(a, b))


def sum(I: Ideal, J: Ideal, params: IsolationParams | None = None) -> Ideal:  # noqa: A001
    """I + J: common points with the smaller multiplicity (the gcd)."""
    if isinstance(I, ZeroIdeal):
        return J
    if isinstance(J, ZeroIdeal):
        return I
    return PrincipalIdeal(_combine(I.divisor, J.divisor, min, params or DEFAULT_PARAMS))


def product(I: Ideal, J: Ideal, params: IsolationParams | None = None) -> Ideal:
    """I * J: multiplicities add."""
    if isinstance(I, ZeroIdeal) or isinstance(J, ZeroIdeal):
        return ZeroIdeal()
    divisor = add_divisors(I.divisor, J.divisor, params)
    return PrincipalIdeal(divisor, _product_generator(I.generator, J.generator))


def intersect(I: Ideal, J: Ideal, params: IsolationParams | None = None) -> Ideal:
    """I ∩ J: every point with the larger multiplicity (the lcm)."""
    if isinstance(I, ZeroIdeal) or isinstance(J, ZeroIdeal):
        return ZeroIdeal()
    return PrincipalIdeal(_combine(I.divisor, J.divisor, max, params or DEFAULT_PARAMS))


def quotient(I: Ideal, J: Ideal, params: IsolationParams | None = None) -> Ideal:
    """
    The colon ideal (I : J), multiplicities subtracted and clamped at 0.

    :raises ZeroDivisorArgument: if J is the zero ideal
    """
    if isinstance(J, ZeroIdeal):
        raise ZeroDivisorArgument("the quotient by the zero ideal is undefined")
    if isinstance(I, ZeroIdeal):
        return ZeroIdeal()
    divisor = _combine(I.divisor, J.divisor, lambda m, n: max(m - n, 0), params or DEFAULT_PARAMS)
    return PrincipalIdeal(divisor)


def power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise ValueError("ideal powers must be non-negative")
    if k == 0:
        return unit_ideal()
    if isinstance(I, ZeroIdeal):
        return I
    divisor = Divisor(tuple(DivisorEntry(e.point, e.multiplicity * k) for e in I.divisor))
    generator = None if I.generator is None else normalize(IntPow(I.generator, k))
    return PrincipalIdeal(divisor, generator)


def contains(I: Ideal, J: Ideal, params: IsolationParams | None = None) -> bool:
    """Whether J ⊆ I, i.e. the divisor of I is dominated by the divisor of J."""
    if isinstance(J, ZeroIdeal):
        return True
    if isinstance(I, ZeroIdeal):
        return False
    return all(m <= n for _, m, n in _match(I.divisor, J.divisor, params or DEFAULT_PARAMS))


def same_ideal(I: Ideal, J: Ideal, params: IsolationParams | None = None) -> bool:
    if isinstance(I, ZeroIdeal) or isinstance(J, ZeroIdeal):
        return isinstance(I, ZeroIdeal) and isinstance(J, ZeroIdeal)
    if I.divisor.degree != J.divisor.degree:
        return False
    return all(m == n for _, m, n in _match(I.divisor, J.divisor, params or DEFAULT_PARAMS))


def membership(
    f: Expr, I: Ideal, params: IsolationParams | None = None
) -> bool | Undecidable:
    """
    Whether f lies in I: f vanishes at every point of I's divisor with at
    least the listed multiplicity.

    :raises NotAnalyticError: if f is not analytic on [0,1]
    """
    params = params or DEFAULT_PARAMS
    verdict = check_analytic(f, params)
    if isinstance(verdict, NotAnalytic):
        raise NotAnalyticError(verdict.witness, str(verdict))
    g = normalize(f)
    if isinstance(g, Const) and g.value == 0:
        return True
    if isinstance(I, ZeroIdeal):
        result = isolate_zeros(g, params=params)
        return result if isinstance(result, Undecidable) else isinstance(result, ZeroFunction)

    for entry in I.divisor:
        point = entry.point
        if isinstance(point, ExactRational):
            vanishes = vanishes_to_order(g, point.value, entry.multiplicity, params)
            if vanishes is None:
                return Undecidable(
                    (point.value, point.value),
                    f"cannot certify the vanishing order of f at {point.value}",
                )
            if not vanishes:
                return False
            continue

        local = isolate_in(g, point.lo, point.hi, params)
        if isinstance(local, Undecidable):
            return local
        assert isinstance(local, Divisor)
        try:
            matched = [e for e in local if same_point(point, e.point, params)]
        except PointIdentityUndecidable as e:
            return Undecidable((point.lo, point.hi), str(e))
        if not matched or matched[0].multiplicity < entry.multiplicity:
            return False
    return True


# --- structure ------------------------------------------------------------------


def is_maximal(I: Ideal) -> bool:
    if isinstance(I, ZeroIdeal):
        return False
    return len(I.divisor) == 1 and I.divisor.entries[0].multiplicity == 1


def is_prime(I: Ideal) -> bool:
    """The zero ideal is prime (the ring is an integral domain); other primes are maximal."""
    return isinstance(I, ZeroIdeal) or is_maximal(I)


def factor_maximals(I: Ideal) -> list[MaximalFactor]:
    """
    The factorization of I into powers of maximal ideals, sorted by point.

    :raises ZeroIdealNotFactorable: for the zero ideal
    """
    if isinstance(I, ZeroIdeal):
        raise ZeroIdealNotFactorable("the zero ideal is not a product of maximal ideals")
    return [MaximalFactor(e.point, e.multiplicity) for e in I.divisor]


def radical(I: Ideal) -> Ideal:
    if isinstance(I, ZeroIdeal):
        return I
    return PrincipalIdeal(Divisor(tuple(DivisorEntry(e.point, 1) for e in I.divisor)))


def _linear_factor(q: Fraction) -> Expr:
    return X if q == 0 else Sub(X, Const(q))


def canonical_generator(I: Ideal) -> Expr | Unrepresentable:
    """
    The monic polynomial with exactly the divisor of I, when every point of the
    divisor is rational.
    """
    if isinstance(I, ZeroIdeal):
        return Const(Fraction(0))
    if not I.divisor.all_rational:
        return Unrepresentable(tuple(factor_maximals(I)))
    generator: Expr | None = None
    for entry in I.divisor:
        assert isinstance(entry.point, ExactRational)
        term = _linear_factor(entry.point.value)
        if entry.multiplicity > 1:
            term = IntPow(term, entry.multiplicity)
        generator = term if generator is None else Mul(generator, term)
    return generator if generator is not None else Const(Fraction(1))
