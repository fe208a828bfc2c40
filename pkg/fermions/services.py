"""
Fermionic representation services.

Every operation mirrors its boson counterpart on ``f_counts`` and adds the
fermion bookkeeping: h labels under the no-holes policy (remove the highest
occupied h, add at the lowest free one) and the anticommutation phase.
"""

from __future__ import annotations

import logging
from typing import Sequence

from rest_framework.exceptions import ValidationError

from bosons.exceptions import InvariantBreach, RuleNotApplicable
from bosons.services import OccupationService, ReductionService, RewriteService, RewriteStep, Rule
from bosons.states import SLOTS, ZERO_VECTOR, Kind, OccupationState, StandardForm, state_value_parts
from dyadic.numbers import GaussianDyadic, Sign

from .strings import FermionMode, FermionString

logger = logging.getLogger(__name__)


def _removal_parity(modes: Sequence[FermionMode], index: int) -> int:
    # The removed mode travels to the right end, past later same-kind modes.
    kind = modes[index].kind
    return sum(1 for m in modes[index + 1:] if m.kind == kind)


class FermionService:
    """Creation, annihilation and conversion of fermion strings."""

    @staticmethod
    def f_apply_creation(s: FermionString, mode: FermionMode):
        """
        Append a creation operator on the right of the product and move it to
        its canonical place.

        Returns:
            The new FermionString, or ZERO_VECTOR if the mode is already
            occupied (a fermion creation operator squares to zero).
        """
        mode = FermionMode(Kind(mode.kind), Sign(mode.sign), mode.h, mode.j)
        if mode in s.modes:
            return ZERO_VECTOR
        passed = sum(1 for m in s.modes if m.kind == mode.kind and m.canonical_key > mode.canonical_key)
        modes = tuple(sorted(s.modes + (mode,), key=lambda m: m.canonical_key))
        return FermionString(modes, s.phase * (-1) ** passed)

    @staticmethod
    def f_apply_annihilation(s: FermionString, mode: FermionMode):
        """Inverse of f_apply_creation; ZERO_VECTOR when the mode is empty."""
        mode = FermionMode(Kind(mode.kind), Sign(mode.sign), mode.h, mode.j)
        if mode not in s.modes:
            return ZERO_VECTOR
        index = s.modes.index(mode)
        parity = _removal_parity(s.modes, index)
        return FermionString(s.modes[:index] + s.modes[index + 1:], s.phase * (-1) ** parity)

    @staticmethod
    def f_counts(s: FermionString) -> OccupationState:
        counts: dict[int, list[int]] = {}
        for mode in s.modes:
            counts.setdefault(mode.j, [0, 0, 0, 0])[SLOTS.index((mode.kind, mode.sign))] += 1
        return OccupationState(counts)

    @staticmethod
    def f_from_counts(c: OccupationState) -> FermionString:
        """Canonical string with h = count .. 1 in each block and phase +1."""
        modes = []
        for j, occupancy in c.items():
            for (kind, sign), count in zip(SLOTS, occupancy):
                modes.extend(FermionMode(kind, sign, h, j) for h in range(count, 0, -1))
        return FermionString(tuple(modes), 1)

    @staticmethod
    def f_value(s: FermionString) -> GaussianDyadic:
        # h never contributes to the value
        return state_value_parts(FermionService.f_counts(s))

    @staticmethod
    def f_add_basis(u: FermionString, v: FermionString) -> FermionString:
        """
        Fermionic concatenation of two basis strings.

        The result is written in canonical order with shared blocks relabelled
        h = count .. 1; its sign is + for an even total fermion number and -
        for an odd one.
        """
        combined = OccupationService.accumulate([FermionService.f_counts(u), FermionService.f_counts(v)])
        canonical = FermionService.f_from_counts(combined)
        phase = -1 if len(canonical) % 2 else 1
        return FermionString(canonical.modes, phase)


# ============================================================
# REWRITE SERVICES
# ============================================================

class FermionRewriteService:
    """The cancel, carry and borrow rules with h subscripts."""

    @staticmethod
    def _remove_top(s: FermionString, kind: Kind, sign: Sign, j: int) -> FermionString:
        hs = s.block_hs(kind, sign, j)
        if not hs:
            raise RuleNotApplicable(f"No {kind.value}{sign.symbol} fermion at site {j}")
        return FermionService.f_apply_annihilation(s, FermionMode(kind, sign, max(hs), j))

    @staticmethod
    def _insert_lowest(s: FermionString, kind: Kind, sign: Sign, j: int) -> FermionString:
        occupied = set(s.block_hs(kind, sign, j))
        h = 1
        while h in occupied:
            h += 1
        return FermionService.f_apply_creation(s, FermionMode(kind, sign, h, j))

    @staticmethod
    def f_rewrite_cancel(s: FermionString, kind: Kind, j: int, times: int = 1) -> FermionString:
        kind = Kind(kind)
        RewriteService.rewrite_cancel(FermionService.f_counts(s), kind, j, times)
        for _ in range(times):
            s = FermionRewriteService._remove_top(s, kind, Sign.PLUS, j)
            s = FermionRewriteService._remove_top(s, kind, Sign.MINUS, j)
        return s

    @staticmethod
    def f_rewrite_carry(s: FermionString, kind: Kind, sign: Sign, j: int, times: int = 1) -> FermionString:
        """Two fermions with distinct h at j become one at j + 1."""
        kind, sign = Kind(kind), Sign(sign)
        RewriteService.rewrite_carry(FermionService.f_counts(s), kind, sign, j, times)
        for _ in range(times):
            s = FermionRewriteService._remove_top(s, kind, sign, j)
            s = FermionRewriteService._remove_top(s, kind, sign, j)
            s = FermionRewriteService._insert_lowest(s, kind, sign, j + 1)
        return s

    @staticmethod
    def f_rewrite_borrow(s: FermionString, kind: Kind, j: int, k: int, sign: Sign | None = None) -> FermionString:
        kind = Kind(kind)
        sign = RewriteService.resolve_borrow_sign(FermionService.f_counts(s), kind, j, k, sign)
        s = FermionRewriteService._remove_top(s, kind, sign, j)
        s = FermionRewriteService._remove_top(s, kind, sign.opposite, k)
        for site in range(k, j):
            s = FermionRewriteService._insert_lowest(s, kind, sign, site)
        return s

    @staticmethod
    def f_apply_step(s: FermionString, step: RewriteStep) -> FermionString:
        if step.rule == Rule.CANCEL:
            return FermionRewriteService.f_rewrite_cancel(s, step.kind, step.j, step.times)
        if step.rule == Rule.CARRY:
            return FermionRewriteService.f_rewrite_carry(s, step.kind, step.sign, step.j, step.times)
        for _ in range(step.times):
            s = FermionRewriteService.f_rewrite_borrow(s, step.kind, step.j, step.k, step.sign)
        return s

    @staticmethod
    def f_reduction_trace(s: FermionString) -> tuple[StandardForm, FermionString, list[RewriteStep]]:
        """
        Reduce a fermion string by replaying the boson reduction's steps on it.

        The rewrites take the highest h and insert the lowest free one, so the
        input must have no holes: each occupied mode holds h = 1..n.
        f_apply_creation with an arbitrary h can leave holes; such strings
        are refused.

        Returns:
            (StandardForm, final string with h = 1 everywhere, steps)

        Raises:
            ValidationError: when the h labels of some mode have holes.
        """
        if s.has_holes():
            raise ValidationError(f"{s} leaves holes in its h labels")
        form, steps = ReductionService.reduction_trace(FermionService.f_counts(s))
        final = s
        for step in steps:
            final = FermionRewriteService.f_apply_step(final, step)
        if any(m.h != 1 for m in final.modes) or FermionService.f_counts(final) != form.to_state():
            raise InvariantBreach(f"Fermion reduction ended on {final}, expected {form}")
        logger.debug(f"Fermion reduction of {len(s)} modes finished with phase {final.phase:+d}")
        return form, final, steps

    @staticmethod
    def f_reduce_to_standard(s: FermionString) -> StandardForm:
        """Standard form of a hole-free string; see f_reduction_trace."""
        form, _, _ = FermionRewriteService.f_reduction_trace(s)
        return form
