import os
import random
import tempfile
from fractions import Fraction
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework import status
from rest_framework.test import APISimpleTestCase

from bosons.exceptions import LiteralParseError
from bosons.parsers import parse_literal, parse_trace_line
from bosons.services import RewriteService

from .exceptions import NonStandardInput
from .selftest import (
    check_addition,
    check_approximation,
    check_confluence,
    check_dyadic,
    check_fermions,
    check_morphism,
    check_subtraction,
    check_trace_additivity,
)
from .services import NumioService

WORKED_EXAMPLE = 'a+@3 b+@3 a-@2 b-@4 a-@-6'
TWO_TERMS = '1/sqrt(2)(a+@7 a-@6 b-@4) + 1/sqrt(2)(a-@-2 b-@6)'
OTHER_TWO_TERMS = '1/sqrt(2)(a+@1) + 1/sqrt(2)(b+@0)'


def run(*args):
    out = StringIO()
    call_command('numio', *args, stdout=out)
    return out.getvalue().splitlines()


class ReduceCommandTests(SimpleTestCase):

    def test_worked_example(self):
        self.assertEqual(run('reduce', WORKED_EXAMPLE), ['11.111111, -i1000'])

    def test_trivial_inputs(self):
        self.assertEqual(run('reduce', 'vacuum'), ['0'])
        self.assertEqual(run('reduce', 'a+@0^2'), ['10'])
        self.assertEqual(run('reduce', '--style', 'occupation', 'a+@0^2'), ['a+@1'])
        self.assertEqual(run('reduce', '--style', 'fraction', WORKED_EXAMPLE), ['255/64 - 8 i'])

    def test_trace(self):
        self.assertEqual(run('reduce', '--trace', 'a+@0^2'), ['carry a+@0 x1 = 2', '10'])

    def test_trace_replays_to_the_same_state(self):
        lines = run('reduce', '--trace', '--style', 'occupation', WORKED_EXAMPLE)
        steps = [parse_trace_line(line) for line in lines[:-1]]
        self.assertTrue(steps)
        for line in lines[:-1]:
            self.assertTrue(line.endswith('= 255/64 - 8 i'))
        self.assertEqual(RewriteService.replay(parse_literal(WORKED_EXAMPLE), steps), parse_literal(lines[-1]))

    def test_golden_literals_round_trip(self):
        self.assertEqual(run('reduce', '--style', 'occupation', '10100.0011'), ['a+@4 a+@2 a+@-3 a+@-4'])
        self.assertEqual(run('reduce', 'a+@4 a+@2 a+@-3 a+@-4'), ['10100.0011'])
        self.assertEqual(run('reduce', '10.11, -i111.1'), ['10.11, -i111.1'])

    def test_fermion_reduction(self):
        self.assertEqual(run('reduce', '--fermion', 'a+@0^2'), ['10', 'fermion: a+@1:1 phase -1'])

    def test_parse_error_exit_code(self):
        with self.assertRaises(CommandError) as caught:
            run('reduce', 'a+@x')
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('column', str(caught.exception))


class ValueCommandTests(SimpleTestCase):

    def test_fraction_and_decimal(self):
        self.assertEqual(run('value', 'a+@2 a-@0 b-@3 b+@-1 a-@-2'), ['11/4 - 15/2 i', '2.75 - 7.5 i'])
        self.assertEqual(run('value', 'vacuum'), ['0', '0'])

    def test_decimal_style(self):
        self.assertEqual(run('value', '--style', 'decimal', 'a+@4 a+@2 a+@-3 a+@-4'), ['20.1875'])

    def test_binary_needs_a_standard_state(self):
        with self.assertRaises(CommandError) as caught:
            run('value', '--style', 'binary', 'a+@0^2')
        self.assertEqual(caught.exception.returncode, 2)
        self.assertEqual(run('value', '--style', 'binary', '--reduce', 'a+@0^2'), ['10'])
        self.assertEqual(run('value', '--style', 'binary', 'a+@1 b-@0'), ['10, -i1'])


class ArithmeticCommandTests(SimpleTestCase):

    def test_one_plus_one(self):
        self.assertEqual(run('add', '1', '1'), ['nonstandard: a+@0^2', 'standard: 10'])

    def test_x_minus_x(self):
        self.assertEqual(run('sub', '101', '101'), ['nonstandard: a+@2 a-@2 a+@0 a-@0', 'standard: 0'])

    def test_nonstandard_operands(self):
        with self.assertRaises(CommandError) as caught:
            run('add', 'a+@0^2', '1')
        self.assertEqual(caught.exception.returncode, 2)
        self.assertEqual(run('add', '--allow-nonstandard', 'a+@0^2', '1')[-1], 'standard: 11')

    def test_fermionic_addition(self):
        self.assertEqual(
            run('add', '--fermion', '1', '1'),
            ['nonstandard: a+@0:2 a+@0:1 phase +1', 'standard: 10', 'fermion: a+@1:1 phase -1'],
        )

    def test_complex_sum(self):
        report = NumioService.combine('10.1', '-i1.1')
        self.assertEqual(report.lines[-1], 'standard: 10.1, -i1.1')
        self.assertEqual(report.data['value'], '5/2 - 3/2 i')


class AccumulateCommandTests(SimpleTestCase):

    def write(self, text):
        handle = tempfile.NamedTemporaryFile('w', suffix='.txt', delete=False, encoding='utf-8')
        handle.write(text)
        handle.close()
        self.addCleanup(os.remove, handle.name)
        return handle.name

    def test_hundred_ones(self):
        path = self.write('a+@0\n' * 100)
        self.assertEqual(run('accumulate', path), ['standard: 1100100', 'value: 100'])

    def test_empty_file(self):
        self.assertEqual(run('accumulate', self.write('')), ['standard: 0', 'value: 0'])

    def test_full_cancellation_with_comments(self):
        path = self.write('# all four types at site 0\na+@0\na-@0\n\nb+@0\nb-@0\n')
        self.assertEqual(run('accumulate', path), ['standard: 0', 'value: 0'])

    def test_show_nonstandard(self):
        lines = run('accumulate', '--show-nonstandard', self.write('a+@1\na+@1\nb-@-1\n'))
        self.assertEqual(lines[0], 'nonstandard: a+@1^2 b-@-1')
        self.assertEqual(lines[1].split(), ['site', 'n+', 'n-', 'm+', 'm-'])
        self.assertEqual(lines[2].split(), ['1', '2', '0', '0', '0'])
        self.assertEqual(lines[3].split(), ['-1', '0', '0', '0', '1'])
        self.assertEqual(lines[-1], 'value: 4 - 1/2 i')

    def test_bad_line_is_numbered(self):
        with self.assertRaises(CommandError) as caught:
            run('accumulate', self.write('a+@0\n\na+@y\n'))
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('line 3', str(caught.exception))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as caught:
            run('accumulate', '/nonexistent/numio-table.txt')
        self.assertEqual(caught.exception.returncode, 2)

    def test_service_reports_line_numbers(self):
        with self.assertRaises(LiteralParseError) as caught:
            NumioService.accumulate(['a+@0', '# note', 'nonsense@'])
        self.assertEqual(caught.exception.line, 3)


class ApproxCommandTests(SimpleTestCase):

    def test_one_third(self):
        self.assertEqual(run('approx', '1', '3', '6'), ['standard: 0.010101', 'value: 21/64', 'error: 1/192'])
        self.assertEqual(run('approx', '--style', 'occupation', '1', '3', '6')[0], 'standard: a+@-2 a+@-4 a+@-6')

    def test_dyadic_inputs_are_exact(self):
        self.assertEqual(run('approx', '1', '2', '4'), ['standard: 0.1', 'value: 1/2', 'error: 0'])
        self.assertEqual(run('approx', '--style', 'occupation', '-5', '4', '10')[0], 'standard: a-@0 a-@-2')

    def test_zero_denominator(self):
        with self.assertRaises(CommandError) as caught:
            run('approx', '1', '0', '4')
        self.assertEqual(caught.exception.returncode, 2)

    def test_accuracy_bound(self):
        for k in range(2, 21):
            form, error = NumioService.approximate(1, 3, k)
            self.assertLessEqual(error, Fraction(1, 2 ** k))
            self.assertNotEqual(form.value().re.as_fraction(), Fraction(1, 3))


class FermionizeCommandTests(SimpleTestCase):

    def test_fermionize(self):
        self.assertEqual(run('fermionize', 'a+@0^2'), ['a+@0:2 a+@0:1 phase +1'])
        self.assertEqual(run('fermionize', 'a+@3 a+@1'), ['a+@1:1 a+@3:1 phase +1'])
        self.assertEqual(run('fermionize', 'vacuum'), ['vacuum phase +1'])

    def test_labelled_input(self):
        self.assertEqual(run('fermionize', 'a+@5:1 a+@3:1'), ['a+@3:1 a+@5:1 phase -1'])
        self.assertEqual(run('fermionize', 'a+@0:1 a+@0:1'), ['zero-vector'])


class TraceAddCommandTests(SimpleTestCase):

    def test_two_by_two(self):
        lines = run('trace-add', TWO_TERMS, OTHER_TWO_TERMS)
        components = [line for line in lines if line.startswith('p=')]
        self.assertEqual(len(components), 4)
        for line in components:
            self.assertTrue(line.startswith('p=0.25 '))
        self.assertIn('total probability: 1', lines)
        residual = float(lines[-1].split(': ')[1])
        self.assertLess(residual, 1e-9)

    def test_basis_times_basis(self):
        lines = run('trace-add', '1(a+@0)', '1(a+@0)')
        self.assertEqual(lines[0], 'p=1 value=2 standard=a+@1 state=a+@0^2')

    def test_merge(self):
        lines = run('trace-add', '--merge', '1/sqrt(2)(a+@1) + 1/sqrt(2)(a+@0^2)', '1(vacuum)')
        self.assertEqual(lines[0], 'p=1 value=2 standard=a+@1 state=a+@1')

    def test_unnormalized_input(self):
        with self.assertRaises(CommandError) as caught:
            run('trace-add', '0.5(a+@0)', '1(a+@0)')
        self.assertEqual(caught.exception.returncode, 2)

    def test_components_show_reduced_value_in_style(self):
        lines = run('trace-add', '--style', 'binary', '1(a+@0 a-@0 b+@1)', '1(b+@1)')
        self.assertEqual(lines[0], 'p=1 value=i100 standard=b+@2 state=b+@1^2 a+@0 a-@0')

    def test_value_beyond_float_range_is_an_input_error(self):
        with self.assertRaises(CommandError) as caught:
            run('trace-add', '1(a+@1100)', '1(vacuum)')
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('too large', str(caught.exception))


class SelftestTests(SimpleTestCase):

    def test_command_passes(self):
        lines = run('selftest', '--seed', '1', '--samples', '10')
        self.assertEqual(lines[0], 'seed 1, 10 samples')
        self.assertEqual(lines[-1], 'All properties hold.')

    def test_each_property(self):
        rng = random.Random(2)
        for result in (
            check_dyadic(rng, 200),
            check_morphism(rng, 50),
            check_confluence(rng, 3, orders=4),
            check_addition(rng, 100),
            check_subtraction(rng, 20),
            check_trace_additivity(rng, 10),
            check_fermions(rng, 30),
            check_approximation(),
        ):
            with self.subTest(check=result.name):
                self.assertTrue(result.passed, result.summary())


class GlobalFlagTests(SimpleTestCase):

    def test_flags_before_the_subcommand(self):
        self.assertEqual(run('--style', 'fraction', 'value', WORKED_EXAMPLE), ['255/64 - 8 i'])
        self.assertEqual(run('--style', 'occupation', 'reduce', 'a+@0^2'), ['a+@1'])
        self.assertEqual(run('--trace', 'reduce', 'a+@0^2'), ['carry a+@0 x1 = 2', '10'])
        self.assertEqual(run('--fermion', 'reduce', 'a+@0^2'), ['10', 'fermion: a+@1:1 phase -1'])
        self.assertEqual(run('--seed', '3', 'selftest', '--samples', '5')[0], 'seed 3, 5 samples')

    def test_subcommand_flag_wins(self):
        self.assertEqual(run('--style', 'decimal', 'reduce', '--style', 'fraction', 'a+@0^2'), ['2'])

    def test_flag_that_does_not_apply(self):
        for args in (('--style', 'binary', 'fermionize', 'a+@0'), ('--trace', 'value', 'a+@0'), ('--seed', '1', 'add', '1', '1')):
            with self.subTest(args=args):
                with self.assertRaises(CommandError) as caught:
                    run(*args)
                self.assertEqual(caught.exception.returncode, 2)


class ServiceTests(SimpleTestCase):

    def test_value_refuses_nonstandard_binary(self):
        with self.assertRaises(NonStandardInput):
            NumioService.value('a+@1 a-@0', style='binary')

    def test_reduce_report_data(self):
        report = NumioService.reduce(WORKED_EXAMPLE, style='fraction')
        self.assertEqual(report.data['standard'], '255/64 - 8 i')
        self.assertEqual(report.data['occupation'].split()[:2], ['b-@3', 'a+@1'])
        self.assertTrue(report.data['steps'])


class NumioAPITests(APISimpleTestCase):

    def post(self, name, payload):
        return self.client.post(f'/api/numio/{name}/', payload, format='json')

    def test_reduce(self):
        response = self.post('reduce', {'literal': WORKED_EXAMPLE})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['lines'], ['11.111111, -i1000'])

    def test_add_complex(self):
        response = self.post('add', {'x': '10.1', 'y': '-i1.1'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['data']['standard'], '10.1, -i1.1')

    def test_sub(self):
        response = self.post('sub', {'x': '101', 'y': '101', 'style': 'fraction'})
        self.assertEqual(response.data['lines'][-1], 'standard: 0')

    def test_value_binary_of_nonstandard_is_400(self):
        response = self.post('value', {'literal': 'a+@0^2', 'style': 'binary'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_malformed_literal_is_400(self):
        response = self.post('fermionize', {'literal': 'a+@'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_accumulate(self):
        response = self.post('accumulate', {'lines': ['a+@0'] * 4 + ['# done']})
        self.assertEqual(response.data['lines'], ['standard: 100', 'value: 4'])

    def test_approx_rejects_zero_denominator(self):
        response = self.post('approx', {'p': 1, 'q': 0, 'k': 3})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('q', response.data)

    def test_trace_add(self):
        response = self.post('trace-add', {'psi': TWO_TERMS, 'psi2': OTHER_TWO_TERMS})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(len(response.data['data']['components']), 4)

    def test_trace_add_beyond_float_range_is_400(self):
        response = self.post('trace-add', {'psi': '1(a+@1100)', 'psi2': '1(vacuum)'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_selftest(self):
        response = self.post('selftest', {'seed': 4, 'samples': 5})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data['data']['passed'])
