import random
from fractions import Fraction

from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from dyadic.numbers import GaussianDyadic, Sign
from dyadic.services import DyadicService

from .exceptions import LiteralParseError, RuleNotApplicable
from .parsers import parse_literal, parse_state, parse_tokens, parse_trace_line, render_standard, render_state
from .services import OccupationService, ReductionService, RewriteService, RewriteStep, Rule
from .states import ZERO_VECTOR, Kind, OccupationState, StandardForm


def random_state(rng, max_sites=4, max_count=3, span=6):
    sites = rng.sample(range(-span, span + 1), rng.randint(0, max_sites))
    return OccupationState({j: [rng.randint(0, max_count) for _ in range(4)] for j in sites})


class OccupationStateTests(SimpleTestCase):

    def test_zero_sites_are_not_stored(self):
        self.assertEqual(OccupationState({0: [0, 0, 0, 0]}), OccupationState.vacuum())
        self.assertTrue(OccupationState({5: (0, 0, 0, 0)}).is_vacuum)

    def test_equality_and_hash_ignore_construction_order(self):
        x = OccupationState({2: [1, 0, 0, 0], -1: [0, 0, 1, 0]})
        y = OccupationState({-1: [0, 0, 1, 0], 2: [1, 0, 0, 0]})
        self.assertEqual(x, y)
        self.assertEqual(len({x, y}), 1)

    def test_negative_counts_rejected(self):
        with self.assertRaises(ValidationError):
            OccupationState({0: [-1, 0, 0, 0]})

    def test_negated_is_additive_inverse(self):
        x = parse_state('a+@2 a-@0 b-@3 b+@-1 a-@-2')
        total = OccupationService.accumulate([x, x.negated()])
        self.assertFalse(OccupationService.value(total))
        self.assertTrue(ReductionService.reduce_to_standard(total).is_vacuum)


class OccupationServiceTests(SimpleTestCase):

    def test_value_of_mixed_state(self):
        state = parse_state('a+@2 a-@0 b-@3 b+@-1 a-@-2')
        self.assertEqual(
            OccupationService.value(state),
            GaussianDyadic.from_fractions(Fraction(11, 4), Fraction(-15, 2)),
        )

    def test_vacuum_value_is_zero(self):
        self.assertFalse(OccupationService.value(OccupationState.vacuum()))

    def test_creation_and_annihilation(self):
        state = OccupationService.apply_creation(OccupationState.vacuum(), Kind.A, Sign.PLUS, 0)
        state = OccupationService.apply_creation(state, Kind.A, Sign.PLUS, 0)
        self.assertEqual(state, parse_state('a+@0^2'))
        self.assertEqual(OccupationService.value(state), OccupationService.value(parse_state('a+@1')))
        state = OccupationService.apply_annihilation(state, Kind.A, Sign.PLUS, 0)
        self.assertEqual(state, parse_state('a+@0'))
        self.assertIs(OccupationService.apply_annihilation(state, Kind.B, Sign.MINUS, 0), ZERO_VECTOR)

    def test_accumulate_sums_counts(self):
        total = OccupationService.accumulate([parse_state('a+@0')] * 100)
        self.assertEqual(total.count(Kind.A, Sign.PLUS, 0), 100)
        self.assertEqual(OccupationService.accumulate([]), OccupationState.vacuum())


class RewriteTests(SimpleTestCase):

    def test_cancel(self):
        state = parse_state('a+@1^3 a-@1^2 b+@1')
        self.assertEqual(RewriteService.rewrite_cancel(state, Kind.A, 1, times=2), parse_state('a+@1 b+@1'))
        with self.assertRaises(RuleNotApplicable):
            RewriteService.rewrite_cancel(state, Kind.B, 1)

    def test_carry(self):
        state = parse_state('b-@-3^5')
        self.assertEqual(RewriteService.rewrite_carry(state, Kind.B, Sign.MINUS, -3, times=2), parse_state('b-@-2^2 b-@-3'))
        with self.assertRaises(RuleNotApplicable):
            RewriteService.rewrite_carry(parse_state('b-@-3'), Kind.B, Sign.MINUS, -3)

    def test_borrow_infers_dominant_sign(self):
        state = parse_state('a+@3 a-@0')
        result = RewriteService.rewrite_borrow(state, Kind.A, 3, 0)
        self.assertEqual(result, parse_state('a+@2 a+@1 a+@0'))
        self.assertEqual(OccupationService.value(result), OccupationService.value(state))

    def test_borrow_with_negative_dominant(self):
        state = parse_state('b-@1 b+@-2')
        result = RewriteService.rewrite_borrow(state, Kind.B, 1, -2, Sign.MINUS)
        self.assertEqual(result, parse_state('b-@0 b-@-1 b-@-2'))

    def test_borrow_preconditions(self):
        with self.assertRaises(RuleNotApplicable):
            RewriteService.rewrite_borrow(parse_state('a+@0 a-@3'), Kind.A, 0, 3)
        with self.assertRaises(RuleNotApplicable):
            RewriteService.rewrite_borrow(parse_state('a+@3 a+@0'), Kind.A, 3, 0)
        ambiguous = parse_state('a+@3 a-@3 a+@0 a-@0')
        with self.assertRaises(RuleNotApplicable):
            RewriteService.rewrite_borrow(ambiguous, Kind.A, 3, 0)
        RewriteService.rewrite_borrow(ambiguous, Kind.A, 3, 0, Sign.PLUS)

    def test_applicable_rewrites_preserve_value(self):
        state = parse_state('a+@3 b+@3 a-@2 b-@4 a-@-6 a+@-6^2')
        value = OccupationService.value(state)
        steps = RewriteService.applicable_rewrites(state)
        self.assertIn(RewriteStep(Rule.CANCEL, Kind.A, -6), steps)
        self.assertIn(RewriteStep(Rule.CARRY, Kind.A, -6, Sign.PLUS), steps)
        self.assertIn(RewriteStep(Rule.BORROW, Kind.B, 4, Sign.MINUS, 3), steps)
        for step in steps:
            with self.subTest(step=step.describe()):
                self.assertEqual(OccupationService.value(RewriteService.apply_step(state, step)), value)

    def test_standard_state_has_no_rewrites(self):
        self.assertEqual(RewriteService.applicable_rewrites(parse_state('a+@1 a+@0 b-@3')), [])


class ReductionTests(SimpleTestCase):

    def test_worked_example(self):
        state = parse_state('a+@3 b+@3 a-@2 b-@4 a-@-6')
        form = ReductionService.reduce_to_standard(state)
        self.assertEqual(form, StandardForm(Sign.PLUS, range(-6, 2), Sign.MINUS, {3}))
        self.assertEqual(form.value(), GaussianDyadic.from_fractions(Fraction(255, 64), -8))

    def test_carry_example(self):
        form = ReductionService.reduce_to_standard(parse_state('a+@0^2'))
        self.assertEqual(form, StandardForm(Sign.PLUS, {1}))

    def test_vacuum_reduces_to_itself(self):
        form, steps = ReductionService.reduction_trace(OccupationState.vacuum())
        self.assertTrue(form.is_vacuum)
        self.assertEqual(steps, [])

    def test_large_counts_reduce_in_few_steps(self):
        form, steps = ReductionService.reduction_trace(parse_state('a+@0^1000000'))
        self.assertEqual(form.value(), GaussianDyadic.from_fractions(1000000))
        self.assertLess(len(steps), 40)

    def test_is_standard(self):
        self.assertEqual(ReductionService.is_standard(parse_state('a+@0^2')), (False, None))
        self.assertFalse(ReductionService.is_standard(parse_state('a+@1 a-@0'))[0])
        standard, form = ReductionService.is_standard(parse_state('a-@1 b+@0'))
        self.assertTrue(standard)
        self.assertEqual(form, StandardForm(Sign.MINUS, {1}, Sign.PLUS, {0}))

    def test_trace_replays_to_the_standard_state(self):
        state = parse_state('a+@3 b+@3 a-@2 b-@4 a-@-6')
        form, steps = ReductionService.reduction_trace(state)
        self.assertEqual(RewriteService.replay(state, steps), form.to_state())

    def test_n_equal(self):
        self.assertTrue(ReductionService.n_equal(parse_state('a+@1'), parse_state('a+@0^2')))
        self.assertTrue(ReductionService.n_equal(parse_state('a+@2 a-@0'), parse_state('a+@1 a+@0')))
        self.assertFalse(ReductionService.n_equal(parse_state('a+@1'), parse_state('b+@1')))

    def test_cancel_pair_witnesses(self):
        rng = random.Random(19)
        for _ in range(50):
            state = random_state(rng)
            j = rng.randint(-6, 6)
            for kind in Kind:
                with self.subTest(state=render_state(state), kind=kind, j=j):
                    pair = OccupationService.apply_creation(state, kind, Sign.PLUS, j)
                    pair = OccupationService.apply_creation(pair, kind, Sign.MINUS, j)
                    self.assertNotEqual(pair, state)
                    self.assertTrue(ReductionService.n_equal(state, pair))

    def test_carry_witnesses(self):
        rng = random.Random(23)
        for _ in range(50):
            state = random_state(rng)
            j = rng.randint(-6, 6)
            for kind, sign in ((Kind.B, Sign.PLUS), (Kind.B, Sign.MINUS), (Kind.A, Sign.PLUS)):
                with self.subTest(state=render_state(state), kind=kind, sign=sign, j=j):
                    doubled = OccupationService.apply_creation(state, kind, sign, j)
                    doubled = OccupationService.apply_creation(doubled, kind, sign, j)
                    carried = OccupationService.apply_annihilation(doubled, kind, sign, j)
                    carried = OccupationService.apply_annihilation(carried, kind, sign, j)
                    carried = OccupationService.apply_creation(carried, kind, sign, j + 1)
                    self.assertTrue(ReductionService.n_equal(doubled, carried))
                    self.assertTrue(ReductionService.n_equal(
                        state, OccupationService.apply_annihilation(carried, kind, sign, j + 1),
                    ))

    def test_removing_two_b_plus_for_one_above(self):
        state = parse_state('b+@2^2 a-@0')
        carried = OccupationService.apply_annihilation(state, Kind.B, Sign.PLUS, 2)
        carried = OccupationService.apply_annihilation(carried, Kind.B, Sign.PLUS, 2)
        carried = OccupationService.apply_creation(carried, Kind.B, Sign.PLUS, 3)
        self.assertEqual(carried, parse_state('b+@3 a-@0'))
        self.assertTrue(ReductionService.n_equal(state, carried))

    def test_reduction_agrees_with_oracle(self):
        rng = random.Random(7)
        for _ in range(300):
            state = random_state(rng)
            value = OccupationService.value(state)
            form = ReductionService.reduce_to_standard(state)
            self.assertEqual(form.value(), value)
            self.assertEqual(form, StandardForm(*DyadicService.dy_to_standard_sites(value)))
            self.assertEqual(StandardForm.from_value(value), form)

    def test_random_rewrite_orders_are_confluent(self):
        rng = random.Random(11)
        for _ in range(40):
            state = random_state(rng, max_sites=3, max_count=2, span=4)
            expected = ReductionService.reduce_to_standard(state)
            for _ in range(5):
                final = RewriteService.random_normalization(state, rng)
                self.assertEqual(ReductionService.is_standard(final), (True, expected))


class ParserTests(SimpleTestCase):

    def test_parse_and_render(self):
        state = parse_state('a-@-2 b+@-1 b-@3 a-@0 a+@2')
        self.assertEqual(render_state(state), 'b-@3 a+@2 a-@0 b+@-1 a-@-2')
        self.assertEqual(render_state(parse_state('a+@0 a+@0')), 'a+@0^2')
        self.assertEqual(render_state(parse_state('vacuum')), 'vacuum')

    def test_golden_binary_literals(self):
        self.assertEqual(render_state(parse_literal('10100.0011')), 'a+@4 a+@2 a+@-3 a+@-4')
        self.assertEqual(
            render_state(parse_literal('10.11, -i111.1')),
            'b-@2 a+@1 b-@1 b-@0 a+@-1 b-@-1 a+@-2',
        )

    def test_fermion_labels_are_forgotten(self):
        self.assertEqual(parse_state('a+@0:2 a+@0:1'), parse_state('a+@0^2'))
        tokens = parse_tokens('a+@0:2 b-@-1^3')
        self.assertEqual([t.h for t in tokens], [2, None])
        self.assertEqual(tokens[1].count, 3)

    def test_parse_errors_carry_position(self):
        for literal in ('a+@x', 'c+@1', 'a+@1 a*@2', 'a+@0^0', ''):
            with self.subTest(literal=literal):
                with self.assertRaises(LiteralParseError):
                    parse_state(literal)
        with self.assertRaises(LiteralParseError) as caught:
            parse_state('a+@1 a*@2')
        self.assertIsNotNone(caught.exception.position)
        self.assertIn("column", str(caught.exception.detail[0]))

    def test_render_standard(self):
        self.assertEqual(render_standard(StandardForm(Sign.MINUS, {0, -2})), 'a-@0 a-@-2')

    def test_trace_lines_parse_back(self):
        self.assertEqual(
            parse_trace_line('borrow a+@3>0 x1 = 7'),
            RewriteStep(Rule.BORROW, Kind.A, 3, Sign.PLUS, 0, 1),
        )
        self.assertEqual(parse_trace_line('cancel b@-2 x4'), RewriteStep(Rule.CANCEL, Kind.B, -2, times=4))
        step = RewriteStep(Rule.CARRY, Kind.B, -1, Sign.MINUS, times=3)
        self.assertEqual(parse_trace_line(step.describe()), step)
