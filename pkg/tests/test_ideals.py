import random
import unittest
from fractions import Fraction
from functools import reduce

import mpmath

from anideal.engine import ideals
from anideal.engine.expr import Const, parse
from anideal.engine.ideals import (
    PrincipalIdeal,
    ZeroIdeal,
    canonical_generator,
    contains,
    factor_maximals,
    from_generator,
    intersect,
    is_maximal,
    is_prime,
    maximal_ideal,
    membership,
    power,
    product,
    quotient,
    radical,
    same_point,
    unit_ideal,
)
from anideal.engine.oracle import RatPoly, exact_unit_interval_divisor, from_expr
from anideal.engine.roots import isolate_zeros
from anideal.exceptions import NotAnalyticError, ZeroDivisorArgument, ZeroIdealNotFactorable
from anideal.models import ExactRational, Enclosure, MaximalFactor, Undecidable, Unrepresentable

mpmath.mp.dps = 60

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
POOL = [Fraction(0), Fraction(1, 4), THIRD, HALF, Fraction(2, 3), Fraction(1)]


def ideal(text: str):
    return from_generator(parse(text))


def points(I: PrincipalIdeal) -> list[tuple[Fraction, int]]:
    result = []
    for entry in I.divisor:
        assert isinstance(entry.point, ExactRational), entry
        result.append((entry.point.value, entry.multiplicity))
    return result


def ln2_point() -> Enclosure:
    return isolate_zeros(parse("exp(x) - 2")).entries[0].point


def random_ideal(rng: random.Random, extra: Enclosure):
    """Product of powers of maximal ideals over a small pool of points."""
    if rng.random() < 0.1:
        return ZeroIdeal()
    pool = POOL + [extra]
    chosen = rng.sample(pool, rng.randint(0, 4))
    factors = [power(maximal_ideal(p), rng.randint(1, 3)) for p in chosen]
    return reduce(product, factors, unit_ideal())


def planted(rng: random.Random) -> str:
    roots = [rng.choice(POOL + [Fraction(3, 2)]) for _ in range(rng.randint(1, 4))]
    return "*".join(f"(x - {r})" for r in roots)


class TestConstruction(unittest.TestCase):
    """
    Unit tests for building ideals from generators and points.
    """

    def test_linear_generator_is_maximal(self):
        # Act
        I = ideal("x - 1/2")

        # Assert
        self.assertEqual(points(I), [(HALF, 1)])
        self.assertEqual(I, maximal_ideal(HALF))

    def test_nonzero_constant_gives_the_unit_ideal(self):
        I = ideal("7")
        self.assertTrue(I.is_unit)
        self.assertEqual(I, unit_ideal())

    def test_planted_roots(self):
        self.assertEqual(points(ideal("x*(x-1/2)^2")), [(0, 1), (HALF, 2)])

    def test_zero_generator(self):
        self.assertEqual(ideal("0*exp(x)"), ZeroIdeal())

    def test_undecidable_generator(self):
        self.assertIsInstance(ideal("sin(x)^2+cos(x)^2-1"), Undecidable)

    def test_generator_with_pole(self):
        with self.assertRaises(NotAnalyticError):
            ideal("1/(x - 1/2)")

    def test_equality_ignores_the_generator(self):
        self.assertEqual(ideal("(x-1/2)*exp(x)"), ideal("2*x - 1"))
        self.assertNotEqual(ideal("x - 1/2"), ideal("(x - 1/2)^2"))
        self.assertNotEqual(ideal("x"), ZeroIdeal())

    def test_str(self):
        self.assertEqual(str(ZeroIdeal()), "<0>")
        self.assertEqual(str(unit_ideal()), "<1>")
        self.assertEqual(str(ideal("x*(x-1/2)^2")), "M_0 * M_1/2^2")


class TestMembership(unittest.TestCase):
    """
    Unit tests for ideal membership.
    """

    def test_shared_root(self):
        self.assertIs(membership(parse("x - 1"), ideal("x^2 - 1")), True)

    def test_distinct_roots(self):
        self.assertIs(membership(parse("x - 1/2"), ideal("x - 1/3")), False)

    def test_unit_ideal_contains_everything(self):
        self.assertIs(membership(parse("exp(x)"), unit_ideal()), True)

    def test_multiplicity_matters(self):
        self.assertIs(membership(parse("(x-1/2)^2*sin(x+1)"), ideal("(x-1/2)^2")), True)
        self.assertIs(membership(parse("(x-1/2)*sin(x+1)"), ideal("(x-1/2)^2")), False)

    def test_zero_ideal(self):
        self.assertIs(membership(parse("0*x"), ZeroIdeal()), True)
        self.assertIs(membership(parse("x"), ZeroIdeal()), False)

    def test_irrational_point(self):
        I = ideal("exp(x) - 2")
        self.assertIs(membership(parse("(exp(x) - 2)*(x + 1)"), I), True)
        self.assertIs(membership(parse("x"), I), False)

    def test_shifted_polynomials_lie_in_the_maximal_ideal(self):
        # Arrange
        rng = random.Random(1618)

        for _ in range(100):
            d = rng.randint(1, 16)
            gamma = Fraction(rng.randint(0, d), d)
            I = from_generator(parse(f"x - {gamma}"))
            self.assertTrue(is_maximal(I), gamma)

            for _ in range(20):
                p = RatPoly(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(1, 9))))
                f = p.to_expr() - p(gamma)

                # Act
                verdict = membership(f, I)

                # Assert
                self.assertIs(verdict, True, (str(p), gamma))

    def test_element_with_pole(self):
        with self.assertRaises(NotAnalyticError):
            membership(parse("1/(x - 1/2)"), unit_ideal())

    def test_agrees_with_exact_divisors(self):
        # Arrange
        rng = random.Random(31337)

        for _ in range(40):
            f_text, g_text = planted(rng), planted(rng)
            truth_f = {r.exact: r.multiplicity for r in exact_unit_interval_divisor(from_expr(parse(f_text)))}
            truth_g = exact_unit_interval_divisor(from_expr(parse(g_text)))
            expected = all(truth_f.get(r.exact, 0) >= r.multiplicity for r in truth_g)

            # Act
            verdict = membership(parse(f_text), ideal(g_text))

            # Assert
            self.assertIs(verdict, expected, (f_text, g_text))


class TestAlgebra(unittest.TestCase):
    """
    Unit tests for sums, products, intersections and quotients.
    """

    def test_sum(self):
        self.assertEqual(points(ideals.sum(ideal("(x-1/2)^2"), ideal("(x-1/2)*(x-1/3)"))), [(HALF, 1)])
        self.assertTrue(ideals.sum(ideal("x"), ideal("x - 1")).is_unit)
        self.assertEqual(ideals.sum(ZeroIdeal(), ideal("x")), ideal("x"))

    def test_product(self):
        self.assertEqual(points(product(ideal("x"), ideal("x"))), [(0, 2)])
        I = product(product(maximal_ideal(0), power(maximal_ideal(HALF), 2)), unit_ideal())
        self.assertEqual(points(I), [(0, 1), (HALF, 2)])
        self.assertEqual(product(ZeroIdeal(), ideal("x")), ZeroIdeal())

    def test_product_keeps_a_generator(self):
        I = product(ideal("x"), ideal("x - 1/2"))
        self.assertEqual(I.generator, parse("x*(x - 1/2)"))

    def test_intersect(self):
        I = intersect(ideal("(x-1/2)^2"), ideal("(x-1/2)*(x-1/3)"))
        self.assertEqual(points(I), [(THIRD, 1), (HALF, 2)])
        self.assertEqual(intersect(ideal("x"), unit_ideal()), ideal("x"))
        self.assertEqual(intersect(ideal("x"), ZeroIdeal()), ZeroIdeal())

    def test_quotient(self):
        self.assertEqual(points(quotient(ideal("x^2*(x-1)"), ideal("x"))), [(0, 1), (1, 1)])
        self.assertEqual(quotient(ideal("x - 1/3"), unit_ideal()), ideal("x - 1/3"))
        self.assertTrue(quotient(ideal("x"), ideal("x^3")).is_unit)
        self.assertEqual(quotient(ZeroIdeal(), ideal("x")), ZeroIdeal())

    def test_quotient_by_zero(self):
        with self.assertRaises(ZeroDivisorArgument):
            quotient(ideal("x"), ZeroIdeal())

    def test_power(self):
        self.assertEqual(points(power(ideal("x*(x-1)"), 3)), [(0, 3), (1, 3)])
        self.assertTrue(power(ZeroIdeal(), 0).is_unit)
        with self.assertRaises(ValueError):
            power(ideal("x"), -1)

    def test_contains(self):
        self.assertTrue(contains(ideal("x"), ideal("x^2*(x-1)")))
        self.assertFalse(contains(ideal("x^2"), ideal("x")))
        self.assertTrue(contains(ideal("x"), ZeroIdeal()))
        self.assertFalse(contains(ZeroIdeal(), ideal("x")))

    def test_irrational_points_merge(self):
        # Arrange
        I = ideal("exp(x) - 2")
        J = ideal("(exp(x) - 2)*(x - 1/2)")

        # Act
        total = ideals.sum(I, J)
        both = product(I, J)

        # Assert
        self.assertEqual(total, I)
        self.assertEqual(len(both.divisor), 2)
        self.assertEqual(sorted(e.multiplicity for e in both.divisor), [1, 2])


class TestLatticeLaws(unittest.TestCase):
    """
    Property tests over random decidable ideals.
    """

    def setUp(self):
        self.rng = random.Random(20260101)
        self.extra = ln2_point()

    def samples(self, count: int):
        for _ in range(count):
            yield (
                random_ideal(self.rng, self.extra),
                random_ideal(self.rng, self.extra),
                random_ideal(self.rng, self.extra),
            )

    def test_commutative_associative_idempotent(self):
        for I, J, K in self.samples(60):
            for op in (ideals.sum, intersect, product):
                self.assertEqual(op(I, J), op(J, I))
                self.assertEqual(op(op(I, J), K), op(I, op(J, K)))
            self.assertEqual(ideals.sum(I, I), I)
            self.assertEqual(intersect(I, I), I)

    def test_absorption(self):
        for I, J, _ in self.samples(60):
            self.assertEqual(ideals.sum(I, intersect(I, J)), I)
            self.assertEqual(intersect(I, ideals.sum(I, J)), I)

    def test_gcd_times_lcm(self):
        for I, J, _ in self.samples(60):
            self.assertEqual(product(ideals.sum(I, J), intersect(I, J)), product(I, J))

    def test_quotient_undoes_product(self):
        for I, J, _ in self.samples(60):
            if isinstance(J, ZeroIdeal):
                continue
            big = product(I, J)
            self.assertTrue(contains(J, big))
            self.assertEqual(product(quotient(big, J), J), big)

    def test_factorization_round_trip(self):
        for I, _, _ in self.samples(60):
            if isinstance(I, ZeroIdeal):
                continue
            rebuilt = reduce(
                product,
                (power(maximal_ideal(f.point), f.exponent) for f in factor_maximals(I)),
                unit_ideal(),
            )
            self.assertEqual(rebuilt, I)
            generator = canonical_generator(I)
            if I.divisor.all_rational:
                self.assertEqual(from_generator(generator), I)
            else:
                self.assertIsInstance(generator, Unrepresentable)


class TestIntegralDomain(unittest.TestCase):
    """
    The ideal of a product is the product of the ideals.
    """

    def test_products_of_generators(self):
        # Arrange
        rng = random.Random(4242)
        pool = ["exp(x) - 2", "sin(pi*x)", "cos(pi*x)", "x^2 + 1", "x - 2/3", "(x - 1/4)^2"]

        for _ in range(25):
            f = rng.choice(pool)
            g = rng.choice(pool + [planted(rng)])

            # Act
            whole = ideal(f"({f})*({g})")
            parts = product(ideal(f), ideal(g))

            # Assert
            self.assertEqual(whole, parts, (f, g))

    def test_square_of_a_transcendental_generator(self):
        # Arrange
        f = "exp(x) - 2"

        # Act
        whole = ideal(f"({f})*({f})")

        # Assert
        self.assertIsInstance(whole, PrincipalIdeal)
        self.assertEqual(whole, product(ideal(f), ideal(f)))
        self.assertEqual(whole, power(ideal(f), 2))
        self.assertEqual(whole.divisor.degree, 2)

    def test_shared_irrational_zero_of_polynomials(self):
        # Arrange
        f, g = "x^2 - 1/2", "2*x^2 - 1"

        # Act
        whole = ideal(f"({f})*({g})")

        # Assert
        self.assertEqual(whole, product(ideal(f), ideal(g)))
        [entry] = whole.divisor.entries
        self.assertEqual(entry.multiplicity, 2)
        self.assertTrue(entry.point.lo**2 <= HALF <= entry.point.hi**2)

    def test_zero_product_needs_a_zero_factor(self):
        self.assertEqual(ideal("(0*x)*exp(x)"), ZeroIdeal())
        self.assertNotEqual(ideal("x*(x-1)"), ZeroIdeal())


class TestStructure(unittest.TestCase):
    """
    Unit tests for maximality, primality, factorization and generators.
    """

    def test_is_maximal(self):
        self.assertTrue(is_maximal(ideal("x - 1/3")))
        self.assertFalse(is_maximal(ideal("(x - 1/3)^2")))
        self.assertFalse(is_maximal(unit_ideal()))
        self.assertFalse(is_maximal(ZeroIdeal()))

    def test_is_prime(self):
        self.assertTrue(is_prime(ZeroIdeal()))
        self.assertFalse(is_prime(ideal("x*(x-1)")))
        self.assertTrue(is_prime(ideal("x - 1")))

    def test_factor_maximals(self):
        self.assertEqual(
            factor_maximals(ideal("x*(x-1/2)^2")),
            [MaximalFactor(ExactRational(0), 1), MaximalFactor(ExactRational(HALF), 2)],
        )
        self.assertEqual(factor_maximals(unit_ideal()), [])
        self.assertEqual(
            factor_maximals(ideal("sin(pi*x)")),
            [MaximalFactor(ExactRational(0), 1), MaximalFactor(ExactRational(1), 1)],
        )

    def test_zero_ideal_has_no_factorization(self):
        with self.assertRaises(ZeroIdealNotFactorable):
            factor_maximals(ZeroIdeal())

    def test_radical(self):
        self.assertEqual(points(radical(ideal("x*(x-1/2)^2"))), [(0, 1), (HALF, 1)])
        self.assertEqual(radical(unit_ideal()), unit_ideal())
        self.assertEqual(radical(maximal_ideal(THIRD)), maximal_ideal(THIRD))
        self.assertEqual(radical(ZeroIdeal()), ZeroIdeal())

    def test_canonical_generator(self):
        self.assertEqual(canonical_generator(ideal("x*(x-1/2)^2")), parse("x*(x-1/2)^2"))
        self.assertEqual(canonical_generator(unit_ideal()), Const(1))
        self.assertEqual(canonical_generator(ZeroIdeal()), Const(0))

    def test_dyadic_points_have_a_generator(self):
        for text in ("x - 1/4", "x - 3/4", "(x - 7/32)*exp(x)", "(x - 11/16)^2"):
            # Arrange
            I = ideal(text)

            # Act
            generator = canonical_generator(I)

            # Assert
            self.assertNotIsInstance(generator, Unrepresentable, text)
            self.assertEqual(from_generator(generator), I)

    def test_irrational_point_is_unrepresentable(self):
        # Act
        generator = canonical_generator(ideal("exp(x) - 2"))

        # Assert
        self.assertIsInstance(generator, Unrepresentable)
        (factor,) = generator.factors
        self.assertEqual(factor.exponent, 1)
        self.assertTrue(
            mpmath.mpf(factor.point.lo.numerator) / factor.point.lo.denominator
            <= mpmath.log(2)
            <= mpmath.mpf(factor.point.hi.numerator) / factor.point.hi.denominator
        )


class TestSamePoint(unittest.TestCase):
    """
    Unit tests for deciding whether two certified points coincide.
    """

    def test_rationals(self):
        self.assertTrue(same_point(ExactRational(HALF), ExactRational(Fraction(2, 4))))
        self.assertFalse(same_point(ExactRational(HALF), ExactRational(THIRD)))

    def test_rational_against_enclosure(self):
        enclosure = Enclosure(Fraction(2, 5), Fraction(3, 5), 1, parse("x - 1/2"))
        self.assertTrue(same_point(ExactRational(HALF), enclosure))
        self.assertFalse(same_point(enclosure, ExactRational(Fraction(9, 20))))
        self.assertFalse(same_point(enclosure, ExactRational(Fraction(4, 5))))

    def test_disjoint_enclosures(self):
        a = ln2_point()
        b = isolate_zeros(parse("x^2 - 1/2")).entries[0].point
        self.assertFalse(same_point(a, b))

    def test_polynomial_enclosures(self):
        # Arrange
        a = isolate_zeros(parse("x^2 - 1/2")).entries[0].point
        b = next(e.point for e in isolate_zeros(parse("(x^2 - 1/2)*(x - 1/4)")) if isinstance(e.point, Enclosure))

        # Act / Assert
        self.assertTrue(same_point(a, b))

    def test_shared_factor(self):
        a = ln2_point()
        b = next(e.point for e in isolate_zeros(parse("(exp(x) - 2)*(x + 1)")))
        self.assertTrue(same_point(a, b))


if __name__ == "__main__":
    unittest.main()
