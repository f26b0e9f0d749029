"""
Exact rational polynomial arithmetic used as independent ground truth.

No floating point is used anywhere in this module.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

from anideal.engine.expr import (
    Add,
    Const,
    Div,
    Expr,
    IntPow,
    Mul,
    Neg,
    Sub,
    Var,
    normalize,
)
from anideal.exceptions import BothZeroError, DivisionByZeroPoly
from anideal.models import Divisor, Enclosure, ExactRational
from anideal.utils.logger import logger_setup
from anideal.utils.tools import simplest_between

log = logger_setup(__name__)


@dataclass(frozen=True)
class RatPoly:
    """Polynomial with exact rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        values = [Fraction(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def constant(cls, c: Fraction | int) -> "RatPoly":
        return cls((Fraction(c),))

    @classmethod
    def x(cls) -> "RatPoly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def from_roots(cls, roots: Iterable[Fraction | int]) -> "RatPoly":
        """Monic polynomial with the given roots, repeated as listed."""
        result = cls.constant(1)
        for r in roots:
            result = result * cls((-Fraction(r), Fraction(1)))
        return result

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, q: Fraction | int) -> Fraction:
        q = Fraction(q)
        value = Fraction(0)
        for c in reversed(self.coeffs):
            value = value * q + c
        return value

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if self.is_zero or other.is_zero:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(tuple(out))

    def __pow__(self, n: int) -> "RatPoly":
        result = RatPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, q: Fraction | int) -> "RatPoly":
        return RatPoly(tuple(c * q for c in self.coeffs))

    def shift(self, gamma: Fraction | int) -> "RatPoly":
        """Coefficients of p(x + gamma), i.e. p expanded in powers of (x - gamma)."""
        step = RatPoly((Fraction(gamma), Fraction(1)))
        result = RatPoly()
        for c in reversed(self.coeffs):
            result = result * step + RatPoly.constant(c)
        return result

    def derivative(self) -> "RatPoly":
        return RatPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def primitive_leading(self) -> int:
        """Leading coefficient of the primitive integer multiple of this polynomial."""
        denominators = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        integers = [int(c * denominators) for c in self.coeffs]
        content = gcd(*integers)
        return abs(integers[-1] // content) if content else 1

    def to_expr(self) -> Expr:
        """The polynomial as a normalized expression in x."""
        terms: Expr = Const(Fraction(0))
        for i, c in enumerate(self.coeffs):
            if c:
                monomial = Const(c) if i == 0 else Mul(Const(c), IntPow(Var(), i))
                terms = Add(terms, monomial)
        return normalize(terms)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            power = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if power and c == 1:
                terms.append(power)
            elif power and c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}*{power}" if power else str(c))
        return " + ".join(terms).replace("+ -", "- ")


def poly_divmod(a: RatPoly, b: RatPoly) -> tuple[RatPoly, RatPoly]:
    """
    Polynomial long division, a = q*b + r with deg r < deg b.

    :raises DivisionByZeroPoly: if b is the zero polynomial
    """
    if b.is_zero:
        raise DivisionByZeroPoly(f"cannot divide {a} by the zero polynomial")
    remainder = list(a.coeffs)
    quotient = [Fraction(0)] * max(0, a.degree - b.degree + 1)
    lead = b.leading
    for shift in range(a.degree - b.degree, -1, -1):
        factor = remainder[shift + b.degree] / lead
        quotient[shift] = factor
        if factor:
            for i, c in enumerate(b.coeffs):
                remainder[shift + i] -= factor * c
    return RatPoly(tuple(quotient)), RatPoly(tuple(remainder[: max(b.degree, 0)]))


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """
    Monic greatest common divisor by the Euclidean algorithm.

    :raises BothZeroError: if both arguments are zero
    """
    if a.is_zero and b.is_zero:
        raise BothZeroError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, poly_divmod(a, b)[1]
    return a.monic()


def squarefree_part(p: RatPoly) -> RatPoly:
    if p.degree < 1:
        return p.monic()
    return poly_divmod(p, poly_gcd(p, p.derivative()))[0].monic()


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    sequence = [p, p.derivative()]
    while not sequence[-1].is_zero:
        sequence.append(-poly_divmod(sequence[-2], sequence[-1])[1])
    return sequence[:-1]


def _variations(sequence: list[RatPoly], q: Fraction) -> int:
    signs = [v > 0 for v in (s(q) for s in sequence) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: RatPoly, lo: Fraction | int, hi: Fraction | int) -> int:
    """
    Number of distinct real roots of p in the half-open interval (lo, hi].

    Works on the square-free part with endpoint roots divided out, so that
    the classical sign-variation count applies on the open interval.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if p.is_zero:
        raise ValueError("sturm_count of the zero polynomial")
    if lo >= hi:
        return 0
    q = squarefree_part(p)
    count = 0
    for endpoint in (lo, hi):
        if q.degree >= 1 and q(endpoint) == 0:
            q = poly_divmod(q, RatPoly((-endpoint, Fraction(1))))[0]
            if endpoint == hi:
                count += 1
    if q.degree < 1:
        return count
    sequence = sturm_sequence(q)
    return count + _variations(sequence, lo) - _variations(sequence, hi)


def squarefree_decompose(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """
    Yun's square-free decomposition p = c * prod(p_i^i).

    :return: monic, square-free, pairwise coprime factors with their powers
    """
    if p.is_zero:
        raise ValueError("squarefree_decompose of the zero polynomial")
    if p.degree < 1:
        return []
    derivative = p.derivative()
    a0 = poly_gcd(p, derivative)
    b = poly_divmod(p, a0)[0]
    c = poly_divmod(derivative, a0)[0]
    d = c - b.derivative()
    result: list[tuple[RatPoly, int]] = []
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            result.append((a, i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = c - b.derivative()
        i += 1
    return result


@dataclass(frozen=True)
class OracleRoot:
    """
    A root of a polynomial in [0,1]: exact when rational, otherwise the only
    root in the open interval (lo, hi).
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int
    exact: Fraction | None = None


def _isolate(factor: RatPoly, multiplicity: int) -> list[OracleRoot]:
    roots: list[OracleRoot] = []
    if factor(0) == 0:
        roots.append(OracleRoot(Fraction(0), Fraction(0), multiplicity, Fraction(0)))
    bound = factor.primitive_leading()
    stack = [(Fraction(0), Fraction(1))]
    while stack:
        lo, hi = stack.pop()
        count = sturm_count(factor, lo, hi)
        if count == 0:
            continue
        if count > 1:
            mid = (lo + hi) / 2
            stack.extend([(mid, hi), (lo, mid)])
            continue
        if factor(hi) == 0:
            roots.append(OracleRoot(hi, hi, multiplicity, hi))
            continue
        # a rational root r/s has s | bound; two such roots differ by >= 1/bound^2
        while hi - lo >= Fraction(1, bound * bound):
            mid = (lo + hi) / 2
            if factor(mid) == 0:
                lo = hi = mid
                break
            if sturm_count(factor, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        if lo == hi:
            roots.append(OracleRoot(lo, hi, multiplicity, lo))
            continue
        candidate = simplest_between(lo, hi)
        if factor(candidate) == 0:
            roots.append(OracleRoot(candidate, candidate, multiplicity, candidate))
        else:
            roots.append(OracleRoot(lo, hi, multiplicity))
    return roots


def exact_unit_interval_divisor(p: RatPoly) -> list[OracleRoot]:
    """
    Complete exact divisor of p on [0,1], sorted.

    Rational roots are reported exactly and irrational ones as disjoint
    rational isolating intervals.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial has no divisor")
    roots: list[OracleRoot] = []
    for factor, multiplicity in squarefree_decompose(p):
        roots.extend(_isolate(factor, multiplicity))
    return sorted(roots, key=lambda r: (r.lo, r.hi))


def from_expr(f: Expr) -> RatPoly | None:
    """Exact polynomial of a rational polynomial expression, or None."""
    match f:
        case Const(value=value):
            return RatPoly.constant(value)
        case Var():
            return RatPoly.x()
        case Neg(arg=arg):
            inner = from_expr(arg)
            return None if inner is None else -inner
        case Add(left=left, right=right) | Sub(left=left, right=right) | Mul(
            left=left, right=right
        ):
            a, b = from_expr(left), from_expr(right)
            if a is None or b is None:
                return None
            if isinstance(f, Add):
                return a + b
            if isinstance(f, Sub):
                return a - b
            return a * b
        case Div(left=left, right=right):
            a, b = from_expr(left), from_expr(right)
            if a is None or b is None or b.degree != 0:
                return None
            return a.scale(1 / b.leading)
        case IntPow(base=base, exponent=exponent):
            inner = from_expr(base)
            return None if inner is None else inner**exponent
    return None


def agrees_with(divisor: Divisor, p: RatPoly) -> bool:
    """
    True when an engine divisor matches the exact divisor of p: same entries,
    same multiplicities, rational points equal and enclosures inside the
    matching isolating interval.
    """
    truth = exact_unit_interval_divisor(p)
    if len(truth) != len(divisor):
        log.debug("oracle count %s, engine count %s", len(truth), len(divisor))
        return False
    for root, entry in zip(truth, divisor):
        if root.multiplicity != entry.multiplicity:
            return False
        point = entry.point
        if root.exact is not None:
            if isinstance(point, ExactRational):
                if point.value != root.exact:
                    return False
            elif not point.contains(root.exact):
                return False
        elif isinstance(point, ExactRational):
            return False
        elif isinstance(point, Enclosure) and not (
            point.lo <= root.hi and root.lo <= point.hi
        ):
            return False
    return True
