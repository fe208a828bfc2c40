import random

from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from bosons.exceptions import LiteralParseError
from bosons.parsers import parse_state
from bosons.services import OccupationService, ReductionService
from bosons.states import ZERO_VECTOR, Kind, OccupationState
from dyadic.numbers import Sign

from .parsers import has_fermion_labels, parse_fermion_literal, render_fermion
from .services import FermionRewriteService, FermionService
from .strings import FermionMode, FermionString, same_kind_inversions


def mode(label):
    """``a+@3:1`` -> FermionMode."""
    kind, sign, rest = label[0], label[1], label[3:]
    j, h = rest.split(':')
    return FermionMode(Kind(kind), Sign.from_symbol(sign), int(h), int(j))


class FermionStringTests(SimpleTestCase):

    def test_validation(self):
        with self.assertRaises(ValidationError):
            FermionString((mode('a+@3:1'), mode('a+@1:1')))
        with self.assertRaises(ValidationError):
            FermionString((mode('a+@1:1'), mode('a+@1:1')))
        with self.assertRaises(ValidationError):
            FermionString((mode('a+@1:1'),), phase=2)
        with self.assertRaises(ValidationError):
            FermionString((FermionMode(Kind.A, Sign.PLUS, 0, 1),))

    def test_canonical_order_within_a_site(self):
        s = FermionString((mode('a+@0:2'), mode('a+@0:1'), mode('a-@0:1'), mode('b+@0:1'), mode('b-@0:1')))
        self.assertEqual(str(s), 'a+@0:2 a+@0:1 a-@0:1 b+@0:1 b-@0:1')

    def test_inversions_count_only_same_kind(self):
        self.assertEqual(same_kind_inversions([mode('b+@0:1'), mode('a+@1:1'), mode('a+@0:1')]), 1)
        self.assertEqual(FermionString.from_written([mode('a+@5:1'), mode('a+@3:1')]).phase, -1)
        self.assertEqual(FermionString.from_written([mode('a+@5:1'), mode('b+@3:1')]).phase, 1)

    def test_holes(self):
        self.assertTrue(FermionString((mode('a+@0:2'),)).has_holes())
        self.assertFalse(FermionString((mode('a+@0:2'), mode('a+@0:1'))).has_holes())
        self.assertEqual(str(FermionString.empty()), 'vacuum')


class FermionServiceTests(SimpleTestCase):

    def test_creation_phase(self):
        s = FermionService.f_apply_creation(FermionString.empty(), mode('a+@5:1'))
        s = FermionService.f_apply_creation(s, mode('a+@3:1'))
        self.assertEqual(render_fermion(s), 'a+@3:1 a+@5:1 phase -1')

    def test_other_kind_commutes(self):
        s = FermionService.f_apply_creation(FermionString.empty(), mode('a+@5:1'))
        s = FermionService.f_apply_creation(s, mode('b-@3:1'))
        self.assertEqual(s.phase, 1)

    def test_creation_is_nilpotent(self):
        s = FermionService.f_from_counts(parse_state('a+@0^2 b-@4'))
        for m in s.modes:
            with self.subTest(mode=m.label()):
                self.assertIs(FermionService.f_apply_creation(s, m), ZERO_VECTOR)

    def test_annihilation_inverts_creation(self):
        start = FermionService.f_from_counts(parse_state('a+@5 a+@1 a-@3'))
        created = FermionService.f_apply_creation(start, mode('a+@3:1'))
        self.assertEqual(FermionService.f_apply_annihilation(created, mode('a+@3:1')), start)
        self.assertIs(FermionService.f_apply_annihilation(start, mode('b+@0:1')), ZERO_VECTOR)

    def test_from_counts(self):
        self.assertEqual(render_fermion(FermionService.f_from_counts(parse_state('a+@0^2'))), 'a+@0:2 a+@0:1 phase +1')
        self.assertEqual(render_fermion(FermionService.f_from_counts(parse_state('a+@3 a+@1'))), 'a+@1:1 a+@3:1 phase +1')
        self.assertEqual(FermionService.f_from_counts(OccupationState.vacuum()), FermionString.empty())

    def test_counts_round_trip(self):
        state = parse_state('a+@2^3 a-@0 b-@3^2 b+@-1')
        self.assertEqual(FermionService.f_counts(FermionService.f_from_counts(state)), state)

    def test_value_ignores_h(self):
        s = FermionString((mode('a+@2:7'), mode('b-@0:3')))
        self.assertEqual(FermionService.f_value(s), OccupationService.value(parse_state('a+@2 b-@0')))

    def test_add_basis_phase_is_parity(self):
        one = FermionService.f_from_counts(parse_state('a+@0'))
        total = FermionService.f_add_basis(one, one)
        self.assertEqual(render_fermion(total), 'a+@0:2 a+@0:1 phase +1')
        odd = FermionService.f_add_basis(one, FermionService.f_from_counts(parse_state('a+@1 b-@0')))
        self.assertEqual(odd.phase, -1)
        self.assertEqual(FermionService.f_counts(odd), parse_state('a+@1 a+@0 b-@0'))


class FermionRewriteTests(SimpleTestCase):

    def test_carry_relabels_and_tracks_phase(self):
        s = FermionService.f_from_counts(parse_state('a+@0^2'))
        self.assertEqual(render_fermion(FermionRewriteService.f_rewrite_carry(s, Kind.A, Sign.PLUS, 0)), 'a+@1:1 phase -1')

    def test_cancel_removes_highest_h(self):
        s = FermionService.f_from_counts(parse_state('a+@0^2 a-@0'))
        result = FermionRewriteService.f_rewrite_cancel(s, Kind.A, 0)
        self.assertEqual([m.label() for m in result.modes], ['a+@0:1'])

    def test_borrow_inserts_lowest_free_h(self):
        s = FermionService.f_from_counts(parse_state('a+@2 a+@1 a-@0'))
        result = FermionRewriteService.f_rewrite_borrow(s, Kind.A, 2, 0)
        self.assertEqual(FermionService.f_counts(result), parse_state('a+@1^2 a+@0'))
        self.assertFalse(result.has_holes())

    def test_reduction_with_holes_is_rejected(self):
        with self.assertRaises(ValidationError):
            FermionRewriteService.f_reduce_to_standard(FermionString((mode('a+@0:2'),)))

    def test_creation_with_a_skipped_label_cannot_be_reduced(self):
        s = FermionService.f_from_counts(parse_state('a+@0'))
        holed = FermionService.f_apply_creation(s, mode('a+@0:3'))
        self.assertTrue(holed.has_holes())
        self.assertEqual(FermionService.f_value(holed), OccupationService.value(parse_state('a+@1')))
        with self.assertRaises(ValidationError):
            FermionRewriteService.f_reduction_trace(holed)
        filled = FermionService.f_apply_creation(s, mode('a+@0:2'))
        self.assertFalse(filled.has_holes())
        self.assertEqual(FermionRewriteService.f_reduce_to_standard(filled), ReductionService.reduce_to_standard(parse_state('a+@1')))

    def test_reduction_ends_with_unit_labels(self):
        s = FermionService.f_from_counts(parse_state('a+@3 b+@3 a-@2 b-@4 a-@-6'))
        form, final, steps = FermionRewriteService.f_reduction_trace(s)
        self.assertEqual(form, ReductionService.reduce_to_standard(FermionService.f_counts(s)))
        self.assertTrue(all(m.h == 1 for m in final.modes))
        self.assertTrue(steps)

    def test_agrees_with_boson_reduction(self):
        rng = random.Random(3)
        for _ in range(200):
            sites = rng.sample(range(-5, 6), rng.randint(0, 3))
            state = OccupationState({j: [rng.randint(0, 3) for _ in range(4)] for j in sites})
            s = FermionService.f_from_counts(state)
            self.assertEqual(FermionRewriteService.f_reduce_to_standard(s), ReductionService.reduce_to_standard(state))

    def test_adjacent_transpositions_flip_phase(self):
        rng = random.Random(5)
        labels = ['a+@0:1', 'a-@1:1', 'b+@0:1', 'b-@2:1', 'a+@-1:2', 'a+@-1:1']
        for _ in range(200):
            written = [mode(label) for label in labels]
            rng.shuffle(written)
            i = rng.randrange(len(written) - 1)
            swapped = written[:i] + [written[i + 1], written[i]] + written[i + 2:]
            flip = -1 if written[i].kind == written[i + 1].kind else 1
            self.assertEqual(
                FermionString.from_written(swapped).phase,
                flip * FermionString.from_written(written).phase,
            )


class FermionParserTests(SimpleTestCase):

    def test_written_order_phase(self):
        self.assertEqual(parse_fermion_literal('a+@5:1 a+@3:1').phase, -1)
        self.assertEqual(parse_fermion_literal('a+@0:2 a+@0:1').phase, 1)
        self.assertEqual(parse_fermion_literal('a+@0:1 a+@0:2').phase, -1)

    def test_repeated_mode_is_zero_vector(self):
        self.assertIs(parse_fermion_literal('a+@0:1 b-@2:1 a+@0:1'), ZERO_VECTOR)
        self.assertEqual(render_fermion(ZERO_VECTOR), 'zero-vector')

    def test_holes_rejected(self):
        with self.assertRaises(LiteralParseError):
            parse_fermion_literal('a+@0:2')

    def test_has_labels(self):
        self.assertTrue(has_fermion_labels('a+@0:1'))
        self.assertFalse(has_fermion_labels('a+@0^2'))
