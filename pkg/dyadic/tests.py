import random
from fractions import Fraction

from django.test import SimpleTestCase, override_settings
from rest_framework.exceptions import ValidationError

from .exceptions import ExponentOverflow, FloatOverflow, LiteralParseError
from .numbers import ZERO, Axis, Dyadic, GaussianDyadic, Sign
from .parsers import looks_binary, parse_binary
from .services import DyadicService, RenderService


class DyadicTests(SimpleTestCase):

    def test_canonical_form(self):
        self.assertEqual(Dyadic(12, 0), Dyadic(3, 2))
        self.assertEqual(Dyadic(3, 2).numerator, 3)
        self.assertEqual(Dyadic(0, 5).exponent, 0)
        self.assertEqual(Dyadic(-8, -3), Dyadic(-1, 0))

    def test_addition_is_exact(self):
        half = Dyadic(1, -1)
        self.assertEqual(half + half, Dyadic(1, 0))
        self.assertEqual(Dyadic(1, 40) + Dyadic(1, -40) - Dyadic(1, 40), Dyadic(1, -40))
        self.assertFalse(Dyadic(5, 3) - Dyadic(5, 3))

    def test_ordering(self):
        self.assertLess(Dyadic(-1, 4), Dyadic(1, -4))
        self.assertGreater(Dyadic(3, 0), Dyadic(1, 1))

    def test_from_fraction(self):
        self.assertEqual(Dyadic.from_fraction(Fraction(3, 8)), Dyadic(3, -3))
        self.assertEqual(Dyadic.from_fraction(Fraction(-20)), Dyadic(-5, 2))
        with self.assertRaises(ValidationError):
            Dyadic.from_fraction(Fraction(1, 3))

    def test_sites_of_binary_expansion(self):
        self.assertEqual(Dyadic.from_fraction(Fraction(255, 64)).sites(), frozenset(range(-6, 2)))
        self.assertEqual(Dyadic(-5, 0).sites(), frozenset({0, 2}))
        self.assertEqual(Dyadic().sites(), frozenset())

    def test_power_out_of_range(self):
        with self.assertRaises(ExponentOverflow):
            Dyadic.power(2 ** 63)
        with self.assertRaises(ExponentOverflow):
            Dyadic.power(-(2 ** 63), Sign.MINUS)

    @override_settings(NUMSTATES={'SITE_LIMIT': 10})
    def test_site_limit_comes_from_settings(self):
        Dyadic.power(10)
        with self.assertRaises(ExponentOverflow):
            Dyadic.power(11)


class DyadicPropertyTests(SimpleTestCase):

    def setUp(self):
        self.rng = random.Random(29)

    def random_dyadic(self):
        return Dyadic(self.rng.randrange(-(1 << 64) + 1, 1 << 64), self.rng.randint(-32, 32))

    def random_gaussian(self):
        return GaussianDyadic(self.random_dyadic(), self.random_dyadic())

    def test_canonicalization_is_idempotent(self):
        for _ in range(2000):
            d = self.random_dyadic()
            self.assertTrue(d.numerator % 2 or (d.numerator == 0 and d.exponent == 0))
            self.assertEqual(Dyadic(d.numerator, d.exponent), d)
            shift = self.rng.randint(1, 16)
            again = Dyadic(d.numerator << shift, d.exponent - shift)
            self.assertEqual((again.numerator, again.exponent), (d.numerator, d.exponent))

    def test_standard_sites_round_trip(self):
        for _ in range(10_000):
            x = self.random_gaussian()
            alpha, s, beta, t = DyadicService.dy_to_standard_sites(x)
            self.assertEqual(DyadicService.dy_from_standard_sites(alpha, s, beta, t), x)

    def test_addition_is_commutative_and_associative(self):
        add = DyadicService.dy_add
        for _ in range(2000):
            x, y, z = self.random_gaussian(), self.random_gaussian(), self.random_gaussian()
            self.assertEqual(add(x, y), add(y, x))
            self.assertEqual(add(add(x, y), z), add(x, add(y, z)))
            self.assertEqual(add(x, ZERO), x)

    def test_float_conversion_range(self):
        self.assertEqual(float(Dyadic(3, 1000)), 3 * 2.0 ** 1000)
        self.assertEqual(float(Dyadic(1, -2000)), 0.0)
        with self.assertRaises(FloatOverflow):
            float(Dyadic(1, 1100))
        with self.assertRaises(FloatOverflow):
            float(Dyadic(1, 2 ** 62))


class GaussianDyadicTests(SimpleTestCase):

    def test_from_power_axes(self):
        self.assertEqual(DyadicService.dy_from_power(Sign.PLUS, 3), GaussianDyadic.from_fractions(8, 0))
        self.assertEqual(
            DyadicService.dy_from_power(Sign.MINUS, -1, Axis.IMAGINARY),
            GaussianDyadic.from_fractions(0, Fraction(-1, 2)),
        )

    def test_add_and_negate(self):
        x = GaussianDyadic.from_fractions(Fraction(11, 4), Fraction(-15, 2))
        self.assertEqual(DyadicService.dy_add(x, DyadicService.dy_neg(x)), ZERO)
        self.assertFalse(x - x)
        self.assertEqual(x.to_complex(), complex(2.75, -7.5))

    def test_standard_sites(self):
        x = GaussianDyadic.from_fractions(Fraction(-5, 4), 0)
        self.assertEqual(
            DyadicService.dy_to_standard_sites(x),
            (Sign.MINUS, frozenset({0, -2}), Sign.PLUS, frozenset()),
        )

    def test_standard_sites_inverse(self):
        x = GaussianDyadic.from_fractions(Fraction(255, 64), -8)
        alpha, s, beta, t = DyadicService.dy_to_standard_sites(x)
        self.assertEqual((beta, t), (Sign.MINUS, frozenset({3})))
        self.assertEqual(DyadicService.dy_from_standard_sites(alpha, s, beta, t), x)

    def test_zero_has_positive_empty_components(self):
        self.assertEqual(
            DyadicService.dy_to_standard_sites(ZERO),
            (Sign.PLUS, frozenset(), Sign.PLUS, frozenset()),
        )


class RenderTests(SimpleTestCase):

    def setUp(self):
        self.example = GaussianDyadic.from_fractions(Fraction(11, 4), Fraction(-15, 2))

    def test_binary(self):
        self.assertEqual(RenderService.render(self.example, base=2), '10.11, -i111.1')
        self.assertEqual(RenderService.render_binary(GaussianDyadic.from_fractions(Fraction(323, 16))), '10100.0011')
        self.assertEqual(RenderService.render_binary(GaussianDyadic.from_fractions(2)), '10')
        self.assertEqual(RenderService.render_binary(GaussianDyadic.from_fractions(Fraction(1, 8))), '0.001')
        self.assertEqual(RenderService.render_binary(ZERO), '0')

    def test_fraction_and_decimal(self):
        self.assertEqual(RenderService.render_fraction(self.example), '11/4 - 15/2 i')
        self.assertEqual(RenderService.render(self.example, base=10), '2.75 - 7.5 i')
        self.assertEqual(RenderService.render(GaussianDyadic.from_fractions(Fraction(323, 16)), base=10), '20.1875')
        self.assertEqual(RenderService.render_fraction(GaussianDyadic.from_fractions(0, -8)), '-8 i')
        self.assertEqual(RenderService.render_fraction(ZERO), '0')

    def test_unknown_base_and_style(self):
        with self.assertRaises(ValidationError):
            RenderService.render(self.example, base=16)
        with self.assertRaises(ValidationError):
            RenderService.render_style(self.example, 'hex')


class BinaryLiteralTests(SimpleTestCase):

    def test_parse(self):
        self.assertEqual(parse_binary('10.11, -i111.1'), GaussianDyadic.from_fractions(Fraction(11, 4), Fraction(-15, 2)))
        self.assertEqual(parse_binary('10100.0011'), GaussianDyadic.from_fractions(Fraction(323, 16)))
        self.assertEqual(parse_binary('-i1.1'), GaussianDyadic.from_fractions(0, Fraction(-3, 2)))
        self.assertEqual(parse_binary('0'), ZERO)

    def test_round_trip_golden_literals(self):
        for literal in ('10.11, -i111.1', '10100.0011', '-i1000', '0.001'):
            with self.subTest(literal=literal):
                self.assertEqual(RenderService.render_binary(parse_binary(literal)), literal)

    def test_rejects_malformed(self):
        with self.assertRaises(LiteralParseError) as caught:
            parse_binary('10.2')
        self.assertIsNotNone(caught.exception.position)
        with self.assertRaises(LiteralParseError):
            parse_binary('1, 10')
        with self.assertRaises(LiteralParseError):
            parse_binary('i1, -i1')

    def test_looks_binary(self):
        self.assertTrue(looks_binary('10.1'))
        self.assertFalse(looks_binary('a+@0'))
        self.assertFalse(looks_binary('vacuum'))
        self.assertFalse(looks_binary('   '))
