"""
Addition and subtraction on three-register product states, the partial
trace to a classical mixture, and number-operator expectation values.
"""

from __future__ import annotations

import logging
import math

from django.conf import settings

from bosons.services import OccupationService, ReductionService
from bosons.states import OccupationState, StandardForm
from dyadic.exceptions import FloatOverflow
from fermions.services import FermionService

from .exceptions import NormalizationError
from .registers import MixedState, Superposition, TripleRegister

logger = logging.getLogger(__name__)


class SuperpositionService:
    """Linear-combination arithmetic over boson basis states."""

    @staticmethod
    def _require_normalized(x: Superposition, name: str):
        if not x.is_normalized():
            logger.warning(f"Rejected {name}: norm squared {x.norm_squared()!r}")
            raise NormalizationError(
                f"{name} is not normalized (sum of |amplitude|^2 = {x.norm_squared():.15g})"
            )

    @staticmethod
    def normalized(x: Superposition) -> Superposition:
        norm = math.sqrt(x.norm_squared())
        if norm == 0:
            raise NormalizationError('Cannot normalize an empty superposition')
        return Superposition({key: amplitude / norm for key, amplitude in x.items()})

    @staticmethod
    def op_add(x: Superposition, y: Superposition) -> TripleRegister:
        """
        Apply the addition operator to |x>|y>|0>.

        Each basis pair (u, v) with amplitudes d, d' becomes the term
        |u>|v>|u + v> with amplitude d * d', where u + v is the concatenated
        (generally nonstandard) occupation state.
        """
        SuperpositionService._require_normalized(x, 'first operand')
        SuperpositionService._require_normalized(y, 'second operand')
        terms = [
            ((u, v, OccupationService.accumulate([u, v])), d * d_prime)
            for u, d in x.items()
            for v, d_prime in y.items()
        ]
        result = TripleRegister(terms)
        logger.info(f"Added {len(x)}-term and {len(y)}-term superpositions into {len(result)} entangled terms")
        return result

    @staticmethod
    def op_subtract(x: Superposition, y: Superposition) -> TripleRegister:
        """Addition of x to the additive inverse of every basis state of y."""
        SuperpositionService._require_normalized(y, 'second operand')
        inverse = Superposition({v.negated(): d for v, d in y.items()})
        return SuperpositionService.op_add(x, inverse)

    @staticmethod
    def op_add_fermionic(x: Superposition, y: Superposition) -> TripleRegister:
        """
        Fermionic addition: registers hold canonical fermion strings and the
        third register carries the parity sign of the combined fermion count.
        """
        SuperpositionService._require_normalized(x, 'first operand')
        SuperpositionService._require_normalized(y, 'second operand')
        terms = []
        for u, d in x.items():
            fu = FermionService.f_from_counts(u)
            for v, d_prime in y.items():
                fv = FermionService.f_from_counts(v)
                terms.append(((fu, fv, FermionService.f_add_basis(fu, fv)), d * d_prime))
        return TripleRegister(terms)

    @staticmethod
    def partial_trace_12(t: TripleRegister) -> MixedState:
        """
        Trace out the first two registers.

        The result is diagonal: |d|^2 |d'|^2 accumulated per third-register
        key, merging only keys that are identical as stored states.
        """
        probabilities: dict = {}
        for (_, _, third), amplitude in t.items():
            probabilities[third] = probabilities.get(third, 0.0) + abs(amplitude) ** 2
        return MixedState((p, key) for key, p in probabilities.items() if p > 0)

    @staticmethod
    def merge_n_equal(m: MixedState) -> MixedState:
        """Coarse-grain a mixture by standard form, keeping one standard state per class."""
        merged: dict = {}
        for probability, key in m:
            form = ReductionService.reduce_to_standard(_as_state(key))
            merged[form] = merged.get(form, 0.0) + probability
        return MixedState((p, form.to_state()) for form, p in merged.items())

    @staticmethod
    def expectation_N(m: MixedState) -> complex:
        """Tr(N rho) = sum_i p_i value(key_i)."""
        return _weighted_value((p, key) for p, key in m)

    @staticmethod
    def expectation_N_pure(x: Superposition) -> complex:
        """<x|N|x> = sum |d|^2 value(key) for a normalized superposition."""
        SuperpositionService._require_normalized(x, 'superposition')
        return _weighted_value((abs(d) ** 2, key) for key, d in x.items())

    @staticmethod
    def additivity_residual(x: Superposition, y: Superposition) -> float:
        """|Tr(N rho_{x+y}) - (<N>_x + <N>_y)|, expected below EXPECTATION_TOLERANCE."""
        mixture = SuperpositionService.partial_trace_12(SuperpositionService.op_add(x, y))
        expected = SuperpositionService.expectation_N_pure(x) + SuperpositionService.expectation_N_pure(y)
        residual = abs(SuperpositionService.expectation_N(mixture) - expected)
        if residual > settings.NUMSTATES['EXPECTATION_TOLERANCE']:
            logger.warning(f"Expectation additivity residual {residual:.3g} above tolerance")
        return residual


def _as_state(key) -> OccupationState:
    if isinstance(key, OccupationState):
        return key
    if isinstance(key, StandardForm):
        return key.to_state()
    return FermionService.f_counts(key)


def _weighted_value(weighted) -> complex:
    """
    sum_i w_i value(key_i) in floating point.

    Raises FloatOverflow when a value, or the sum, leaves the float range.
    """
    values = [(w, OccupationService.value(_as_state(key))) for w, key in weighted]
    try:
        real = math.fsum(w * float(v.re) for w, v in values)
        imag = math.fsum(w * float(v.im) for w, v in values)
    except OverflowError:
        raise FloatOverflow('Expectation value is too large for a floating-point result') from None
    return complex(real, imag)
