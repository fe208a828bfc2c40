"""
Business logic behind the numio commands.

Both the management command and the HTTP API call these services; each
returns a Report whose ``lines`` are the exact text the CLI prints and
whose ``data`` carries the same results as JSON-friendly values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from rest_framework.exceptions import ValidationError

from bosons.exceptions import InvariantBreach, LiteralParseError
from bosons.parsers import parse_literal, render_standard, render_state
from bosons.services import OccupationService, ReductionService, RewriteService
from bosons.states import SLOTS, ZERO_VECTOR, OccupationState, StandardForm
from dyadic.numbers import Dyadic, GaussianDyadic
from dyadic.services import RenderService
from fermions.parsers import has_fermion_labels, parse_fermion_literal, render_fermion
from fermions.services import FermionRewriteService, FermionService
from superposition.parsers import parse_superposition
from superposition.services import SuperpositionService

from .exceptions import NonStandardInput

logger = logging.getLogger(__name__)

STYLES = ('occupation', 'binary', 'fraction', 'decimal')


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)


# ============================================================
# RENDERING HELPERS
# ============================================================

def render_form(form: StandardForm, style: str) -> str:
    if style == 'occupation':
        return render_standard(form)
    if style not in STYLES:
        raise ValidationError(f"Unknown style '{style}'; choose one of {', '.join(STYLES)}.")
    return RenderService.render_style(form.value(), style)


def format_complex(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g} {'-' if z.imag < 0 else '+'} {abs(z.imag):.12g} i"


def _fermion_input(text: str):
    if has_fermion_labels(text):
        s = parse_fermion_literal(text)
    else:
        s = FermionService.f_from_counts(parse_literal(text))
    if s is ZERO_VECTOR:
        raise ValidationError(f"'{text}' writes a fermion mode twice; the product is the zero vector.")
    return s


def _site_table(state: OccupationState) -> list[str]:
    rows = [f"{'site':>6} {'n+':>5} {'n-':>5} {'m+':>5} {'m-':>5}"]
    for j, occupancy in reversed(state.items()):
        rows.append(f"{j:>6} " + ' '.join(f"{c:>5}" for c in occupancy))
    return rows


# ============================================================
# COMMAND SERVICES
# ============================================================

class NumioService:
    """One static method per numio subcommand."""

    @staticmethod
    def reduce(text: str, style: str = 'binary', fermion: bool = False, trace: bool = False) -> Report:
        """
        Reduce a literal to its standard form.

        With ``trace`` every rewrite step is listed as
        ``<rule> <kind><sign>@<j>[>k] x<times> = <value>``; the value is
        recomputed after each replayed step, so it never changes.
        """
        report = Report()
        if fermion:
            s = _fermion_input(text)
            form, final, steps = FermionRewriteService.f_reduction_trace(s)
            start = FermionService.f_counts(s)
        else:
            start = parse_literal(text)
            form, steps = ReductionService.reduction_trace(start)
            final = None

        if trace:
            expected = OccupationService.value(start)
            state = start
            for step in steps:
                state = RewriteService.apply_step(state, step)
                value = OccupationService.value(state)
                if value != expected:
                    raise InvariantBreach(f"Step '{step.describe()}' changed the value to {value}")
                report.lines.append(f"{step.describe()} = {RenderService.render_fraction(value)}")
            if state != form.to_state():
                raise InvariantBreach('Replaying the trace did not reach the standard form')

        report.lines.append(render_form(form, style))
        report.data = {
            'standard': render_form(form, style),
            'occupation': render_standard(form),
            'steps': [step.describe() for step in steps],
        }
        if final is not None:
            report.lines.append(f"fermion: {render_fermion(final)}")
            report.data['fermion'] = render_fermion(final)
        logger.info(f"Reduced '{text}' in {len(steps)} steps")
        return report

    @staticmethod
    def value(text: str, style: str | None = None, reduce: bool = False) -> Report:
        """
        Exact value of a literal: fraction and decimal by default, or one style.

        Qubit-binary output names a qubit state, and only standard states
        have one; a nonstandard input is refused unless ``reduce`` is set.
        """
        state = parse_literal(text)
        value = OccupationService.value(state)
        report = Report(data={
            'fraction': RenderService.render_fraction(value),
            'decimal': RenderService.render(value, base=10),
        })
        if style is None:
            report.lines = [report.data['fraction'], report.data['decimal']]
            return report
        if style == 'binary':
            standard, _ = ReductionService.is_standard(state)
            if not standard and not reduce:
                logger.warning(f"Refused qubit-binary rendering of nonstandard '{text}'")
                raise NonStandardInput(
                    'Qubit-binary rendering needs a standard state; pass --reduce to reduce first.'
                )
            report.data['binary'] = RenderService.render_binary(value)
        elif style == 'occupation':
            report.data['occupation'] = render_standard(StandardForm.from_value(value))
        elif style not in STYLES:
            raise ValidationError(f"Unknown style '{style}'; choose one of {', '.join(STYLES)}.")
        report.lines = [report.data[style]]
        return report

    @staticmethod
    def combine(x_text: str, y_text: str, subtract: bool = False, style: str = 'binary',
                allow_nonstandard: bool = False, fermion: bool = False) -> Report:
        """
        Concatenate two states (``add``) or one state and the inverse of the
        other (``sub``), then reduce.

        Prints the nonstandard concatenation first and its standard form second.
        """
        x, y = parse_literal(x_text), parse_literal(y_text)
        if not allow_nonstandard:
            for name, state in (('first', x), ('second', y)):
                if not ReductionService.is_standard(state)[0]:
                    raise NonStandardInput(
                        f"The {name} operand is not standard; pass --allow-nonstandard to combine it."
                    )
        if subtract:
            y = y.negated()
        expected = OccupationService.value(x) + OccupationService.value(y)

        if fermion:
            combined = FermionService.f_add_basis(FermionService.f_from_counts(x), FermionService.f_from_counts(y))
            form, final, _ = FermionRewriteService.f_reduction_trace(combined)
            nonstandard = render_fermion(combined)
        else:
            combined = OccupationService.accumulate([x, y])
            form = ReductionService.reduce_to_standard(combined)
            final = None
            nonstandard = render_state(combined)

        if form.value() != expected:
            raise InvariantBreach(f"Sum {form} disagrees with the exact value {expected}")

        report = Report(data={
            'nonstandard': nonstandard,
            'standard': render_form(form, style),
            'value': RenderService.render_fraction(expected),
        })
        report.lines = [f"nonstandard: {nonstandard}", f"standard: {report.data['standard']}"]
        if final is not None:
            report.data['fermion'] = render_fermion(final)
            report.lines.append(f"fermion: {report.data['fermion']}")
        logger.info(f"{'Subtracted' if subtract else 'Added'} '{x_text}' and '{y_text}'")
        return report

    @staticmethod
    def accumulate(lines: Iterable[str], style: str = 'binary', show_nonstandard: bool = False) -> Report:
        """
        Sum a table of literals, one per line; blank lines and ``#`` comments
        are skipped. Any bad line fails the whole run, so a partial sum is
        never reported.
        """
        states = []
        for number, raw in enumerate(lines, start=1):
            text = raw.strip()
            if not text or text.startswith('#'):
                continue
            try:
                states.append(parse_literal(text))
            except LiteralParseError as exc:
                raise LiteralParseError(exc.message, position=exc.position, line=number)
            except ValidationError as exc:
                raise LiteralParseError(str(exc.detail[0] if isinstance(exc.detail, list) else exc.detail),
                                        line=number)

        combined = OccupationService.accumulate(states)
        form = ReductionService.reduce_to_standard(combined)
        value = OccupationService.value(combined)
        report = Report(data={
            'terms': len(states),
            'nonstandard': render_state(combined),
            'standard': render_form(form, style),
            'value': RenderService.render_fraction(value),
        })
        if show_nonstandard:
            report.lines.append(f"nonstandard: {report.data['nonstandard']}")
            report.lines.extend(_site_table(combined))
            report.data['sites'] = occupancy_rows(combined)
        report.lines.append(f"standard: {report.data['standard']}")
        report.lines.append(f"value: {report.data['value']}")
        logger.info(f"Accumulated {len(states)} literals onto {len(combined.items())} sites")
        return report

    @staticmethod
    def approximate(p: int, q: int, k: int) -> tuple[StandardForm, Fraction]:
        """
        Truncate the binary expansion of p/q at site -k.

        Returns:
            (StandardForm, exact error |v - p/q|), the error being below 2**-k.
        """
        if q == 0:
            raise ValidationError('The denominator q must be nonzero.')
        if k < 0:
            raise ValidationError('The accuracy exponent k must be non-negative.')
        target = Fraction(p, q)
        truncated = Fraction(math.floor(abs(target) * 2 ** k), 2 ** k)
        if target < 0:
            truncated = -truncated
        form = StandardForm.from_value(GaussianDyadic(Dyadic.from_fraction(truncated), Dyadic()))
        error = abs(form.value().re.as_fraction() - target)
        if error > Fraction(1, 2 ** k):
            raise InvariantBreach(f"Truncation error {error} exceeds 2**-{k}")
        return form, error

    @staticmethod
    def approx(p: int, q: int, k: int, style: str = 'binary') -> Report:
        form, error = NumioService.approximate(p, q, k)
        report = Report(data={
            'standard': render_form(form, style),
            'value': RenderService.render_fraction(form.value()),
            'error': str(error),
        })
        report.lines = [
            f"standard: {report.data['standard']}",
            f"value: {report.data['value']}",
            f"error: {report.data['error']}",
        ]
        return report

    @staticmethod
    def fermionize(text: str) -> Report:
        if has_fermion_labels(text):
            s = parse_fermion_literal(text)
        else:
            s = FermionService.f_from_counts(parse_literal(text))
        rendered = render_fermion(s)
        return Report(lines=[rendered], data={'fermion': rendered})

    @staticmethod
    def trace_add(psi_text: str, psi2_text: str, merge: bool = False, style: str = 'fraction') -> Report:
        """
        Add two superpositions, trace out the operand registers and check that
        the mixture's expectation of N is the sum of the operands' expectations.

        Each component line gives the reduced value in ``style``, its standard
        state and the stored (generally nonstandard) state.
        """
        x, y = parse_superposition(psi_text), parse_superposition(psi2_text)
        mixture = SuperpositionService.partial_trace_12(SuperpositionService.op_add(x, y))
        if merge:
            mixture = SuperpositionService.merge_n_equal(mixture)
        expectation = SuperpositionService.expectation_N(mixture)
        expected = SuperpositionService.expectation_N_pure(x) + SuperpositionService.expectation_N_pure(y)
        residual = abs(expectation - expected)

        components = []
        report = Report()
        for probability, key in mixture:
            form = ReductionService.reduce_to_standard(key)
            value, standard, state = render_form(form, style), render_standard(form), render_state(key)
            components.append({'probability': probability, 'value': value, 'standard': standard, 'state': state})
            report.lines.append(f"p={probability:.12g} value={value} standard={standard} state={state}")
        report.lines.extend([
            f"total probability: {mixture.total_probability():.12g}",
            f"<N> mixture: {format_complex(expectation)}",
            f"<N> operands: {format_complex(expected)}",
            f"residual: {residual:.3g}",
        ])
        report.data = {
            'components': components,
            'total_probability': mixture.total_probability(),
            'expectation': format_complex(expectation),
            'expected': format_complex(expected),
            'residual': residual,
        }
        return report


def occupancy_rows(state: OccupationState) -> list[dict]:
    """Per-site counts keyed by slot name, sites descending."""
    names = [f"{kind.value}{sign.symbol}" for kind, sign in SLOTS]
    return [{'site': j, **dict(zip(names, occupancy))} for j, occupancy in reversed(state.items())]
