import math
import random

from django.test import SimpleTestCase

from bosons.exceptions import LiteralParseError
from bosons.parsers import parse_state
from bosons.services import OccupationService, ReductionService
from bosons.states import StandardForm
from dyadic.exceptions import FloatOverflow
from dyadic.numbers import Sign
from fermions.parsers import render_fermion

from .exceptions import AmplitudeError, NormalizationError
from .parsers import parse_superposition
from .registers import MixedState, Superposition
from .services import SuperpositionService

HALF = 1 / math.sqrt(2)


class RegisterTests(SimpleTestCase):

    def test_repeated_keys_merge_and_tiny_amplitudes_are_pruned(self):
        k = parse_state('a+@0')
        x = Superposition([(k, 0.5), (k, 0.5), (parse_state('b+@0'), 1e-16)])
        self.assertEqual(x.terms, {k: 1})
        self.assertTrue(x.is_normalized())

    def test_non_finite_amplitude_rejected(self):
        with self.assertRaises(AmplitudeError):
            Superposition({parse_state('a+@0'): float('nan')})

    def test_mixed_state_validation(self):
        a, b = parse_state('a+@0'), parse_state('a+@1')
        with self.assertRaises(AmplitudeError):
            MixedState([(0.5, a), (0.4, b)])
        with self.assertRaises(AmplitudeError):
            MixedState([(0.5, a), (0.5, a)])
        with self.assertRaises(AmplitudeError):
            MixedState([(1.5, a), (-0.5, b)])
        self.assertAlmostEqual(MixedState([(0.25, a), (0.75, b)]).total_probability(), 1.0)

    def test_standard_form_keys_are_stored_as_states(self):
        form = StandardForm(Sign.PLUS, {1}, Sign.MINUS, {0})
        x = Superposition([(form, HALF), (parse_state('a+@1 b-@0'), HALF)])
        self.assertEqual(x.terms, {parse_state('a+@1 b-@0'): complex(2 * HALF)})

    def test_normalized(self):
        x = SuperpositionService.normalized(Superposition({parse_state('a+@0'): 1, parse_state('b-@2'): 1}))
        for amplitude in x.terms.values():
            self.assertAlmostEqual(abs(amplitude), HALF)
        with self.assertRaises(NormalizationError):
            SuperpositionService.normalized(Superposition())


class ParserTests(SimpleTestCase):

    def test_two_term_literal(self):
        x = parse_superposition('1/sqrt(2)(a+@7 a-@6 b-@4) + 1/sqrt(2)(a-@-2 b-@6)')
        self.assertEqual(len(x), 2)
        self.assertTrue(x.is_normalized())
        self.assertAlmostEqual(x.terms[parse_state('a-@-2 b-@6')].real, HALF)

    def test_signs_and_binary_states(self):
        x = parse_superposition('0.6(a+@0) - 0.8(10.1)')
        self.assertEqual(x.terms[parse_state('a+@0')], 0.6)
        self.assertEqual(x.terms[parse_state('a+@1 a+@-1')], -0.8)

    def test_malformed(self):
        for literal in ('1/sqrt(2)(a+@0', '(a+@0)', '0.5(a+@0) 0.5(a+@1)'):
            with self.subTest(literal=literal):
                with self.assertRaises(LiteralParseError):
                    parse_superposition(literal)


class AdditionTests(SimpleTestCase):

    def setUp(self):
        self.x = parse_superposition('1/sqrt(2)(a+@7 a-@6 b-@4) + 1/sqrt(2)(a-@-2 b-@6)')
        self.y = parse_superposition('1/sqrt(2)(a+@1) + 1/sqrt(2)(b+@0)')

    def test_entangled_terms(self):
        t = SuperpositionService.op_add(self.x, self.y)
        self.assertEqual(len(t), 4)
        for (u, v, third), amplitude in t.items():
            self.assertAlmostEqual(abs(amplitude), 0.5)
            self.assertEqual(third, OccupationService.accumulate([u, v]))

    def test_trace_gives_four_quarter_components(self):
        mixture = SuperpositionService.partial_trace_12(SuperpositionService.op_add(self.x, self.y))
        self.assertEqual(len(mixture), 4)
        for probability, _ in mixture:
            self.assertAlmostEqual(probability, 0.25, delta=1e-12)

    def test_basis_times_basis(self):
        x = Superposition.basis(parse_state('a+@0'))
        mixture = SuperpositionService.partial_trace_12(SuperpositionService.op_add(x, x))
        self.assertEqual(mixture.components, ((1.0, parse_state('a+@0^2')),))

    def test_expectation_is_additive(self):
        mixture = SuperpositionService.partial_trace_12(SuperpositionService.op_add(self.x, self.y))
        expected = SuperpositionService.expectation_N_pure(self.x) + SuperpositionService.expectation_N_pure(self.y)
        self.assertAlmostEqual(abs(SuperpositionService.expectation_N(mixture) - expected), 0, delta=1e-9)

    def test_pure_expectation(self):
        self.assertAlmostEqual(SuperpositionService.expectation_N_pure(self.y), complex(1, 0.5))

    def test_unnormalized_operand_rejected(self):
        with self.assertRaises(NormalizationError):
            SuperpositionService.op_add(Superposition({parse_state('a+@0'): 0.5}), self.y)

    def test_subtracting_a_basis_state_from_itself(self):
        x = Superposition.basis(parse_state('a+@3 b-@-2 a+@0'))
        for (_, _, third), _ in SuperpositionService.op_subtract(x, x).items():
            self.assertTrue(ReductionService.reduce_to_standard(third).is_vacuum)

    def test_merge_n_equal(self):
        x = Superposition({parse_state('a+@1'): HALF, parse_state('a+@0^2'): HALF})
        mixture = SuperpositionService.partial_trace_12(
            SuperpositionService.op_add(x, Superposition.basis(parse_state('vacuum')))
        )
        self.assertEqual(len(mixture), 2)
        merged = SuperpositionService.merge_n_equal(mixture)
        self.assertEqual(len(merged), 1)
        probability, key = merged.components[0]
        self.assertAlmostEqual(probability, 1.0)
        self.assertEqual(key, parse_state('a+@1'))

    def test_fermionic_addition(self):
        x = Superposition.basis(parse_state('a+@0'))
        t = SuperpositionService.op_add_fermionic(x, x)
        (_, _, third), amplitude = t.items()[0]
        self.assertEqual(render_fermion(third), 'a+@0:2 a+@0:1 phase +1')
        self.assertEqual(amplitude, 1)

    def test_random_additivity(self):
        rng = random.Random(13)

        def random_superposition():
            terms = {}
            for _ in range(rng.randint(1, 8)):
                sites = rng.sample(range(-6, 7), rng.randint(1, 3))
                state = parse_state(' '.join(f"{rng.choice('ab')}{rng.choice('+-')}@{j}" for j in sites))
                terms[state] = complex(rng.gauss(0, 1), rng.gauss(0, 1))
            return SuperpositionService.normalized(Superposition(terms))

        for _ in range(100):
            self.assertLess(SuperpositionService.additivity_residual(random_superposition(), random_superposition()), 1e-9)


    def test_standard_form_operands(self):
        x = Superposition.basis(StandardForm(Sign.PLUS, {1}))
        y = Superposition({StandardForm(Sign.PLUS, {0}): HALF, StandardForm(Sign.MINUS, {0}, Sign.PLUS, {2}): HALF})
        t = SuperpositionService.op_add(x, y)
        self.assertEqual(len(t), 2)
        thirds = {third for (_, _, third), _ in t.items()}
        self.assertEqual(thirds, {parse_state('a+@1 a+@0'), parse_state('a+@1 a-@0 b+@2')})
        self.assertAlmostEqual(
            SuperpositionService.expectation_N(SuperpositionService.partial_trace_12(t)),
            complex(2, 2),
        )


class ExpectationRangeTests(SimpleTestCase):

    def test_large_site_expectation_is_rejected(self):
        x = parse_superposition('1(a+@1100)')
        with self.assertRaises(FloatOverflow):
            SuperpositionService.expectation_N_pure(x)
        mixture = SuperpositionService.partial_trace_12(
            SuperpositionService.op_add(x, Superposition.basis(parse_state('vacuum')))
        )
        with self.assertRaises(FloatOverflow):
            SuperpositionService.expectation_N(mixture)

    def test_large_but_finite_site(self):
        x = Superposition.basis(parse_state('a+@1000'))
        self.assertEqual(SuperpositionService.expectation_N_pure(x), complex(2.0 ** 1000, 0))

    def test_sum_state_past_the_float_range_is_rejected(self):
        x = Superposition({parse_state('a+@1023'): HALF, parse_state('a+@1022 a+@1021'): HALF})
        y = Superposition.basis(parse_state('a+@1023'))
        with self.assertRaises(FloatOverflow):
            SuperpositionService.additivity_residual(x, y)
