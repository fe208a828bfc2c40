"""
Boson state engine: creation and annihilation, the number-operator value,
the N-equality rewrite rules and reduction to the unique standard form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from dyadic.numbers import GaussianDyadic, Sign

from .exceptions import InvariantBreach, RuleNotApplicable
from .states import (
    SLOTS, ZERO_VECTOR, Kind, OccupationState, SiteOccupancy, StandardForm, slot,
    state_value_parts,
)

logger = logging.getLogger(__name__)


# ============================================================
# REWRITE STEPS
# ============================================================

class Rule(str, Enum):
    CANCEL = 'cancel'
    CARRY = 'carry'
    BORROW = 'borrow'


@dataclass(frozen=True)
class RewriteStep:
    """One application of a rewrite rule, replayable on the state it came from.

    ``sign`` is unused for cancel; for borrow it is the dominant sign at ``j``
    and ``k`` is the lower site holding the opposite sign.
    """
    rule: Rule
    kind: Kind
    j: int
    sign: Sign | None = None
    k: int | None = None
    times: int = 1

    def describe(self) -> str:
        sign = self.sign.symbol if self.sign is not None and self.rule != Rule.CANCEL else ''
        target = f"{self.kind.value}{sign}@{self.j}"
        if self.rule == Rule.BORROW:
            target += f">{self.k}"
        return f"{self.rule.value} {target} x{self.times}"


# ============================================================
# OCCUPATION SERVICES
# ============================================================

class OccupationService:
    """Construction and valuation of boson basis states."""

    @staticmethod
    def apply_creation(state: OccupationState, kind: Kind, sign: Sign, j: int) -> OccupationState:
        return state.adjust([(Kind(kind), Sign(sign), j, 1)])

    @staticmethod
    def apply_annihilation(state: OccupationState, kind: Kind, sign: Sign, j: int):
        """Remove one particle; annihilating an empty mode gives ZERO_VECTOR."""
        if state.count(Kind(kind), Sign(sign), j) == 0:
            return ZERO_VECTOR
        return state.adjust([(Kind(kind), Sign(sign), j, -1)])

    @staticmethod
    def value(state: OccupationState) -> GaussianDyadic:
        """
        Eigenvalue of the number operator:
        sum_j 2**j (n+ - n-) + i sum_j 2**j (m+ - m-).
        """
        return state_value_parts(state)

    @staticmethod
    def accumulate(terms: Iterable[OccupationState]) -> OccupationState:
        """Pointwise sum of occupancy counts, i.e. concatenation of operator products."""
        totals: dict[int, list[int]] = {}
        number_of_terms = 0
        for term in terms:
            number_of_terms += 1
            for j, occupancy in term.sites.items():
                counts = totals.setdefault(j, [0, 0, 0, 0])
                for index, c in enumerate(occupancy):
                    counts[index] += c
        result = OccupationState._trusted({j: SiteOccupancy(*c) for j, c in totals.items()})
        logger.debug(f"Accumulated {number_of_terms} terms onto {len(totals)} sites")
        return result


# ============================================================
# REWRITE SERVICES
# ============================================================

class RewriteService:
    """Single applications of the cancel, carry and borrow rules."""

    @staticmethod
    def rewrite_cancel(state: OccupationState, kind: Kind, j: int, times: int = 1) -> OccupationState:
        """Remove ``times`` (+, -) pairs of one kind at site j: 2**j - 2**j = 0."""
        kind = Kind(kind)
        plus = state.count(kind, Sign.PLUS, j)
        minus = state.count(kind, Sign.MINUS, j)
        if times < 1 or plus < times or minus < times:
            raise RuleNotApplicable(
                f"cancel {kind.value}@{j} x{times} needs {times} of each sign, found +{plus} -{minus}"
            )
        return state.adjust([(kind, Sign.PLUS, j, -times), (kind, Sign.MINUS, j, -times)])

    @staticmethod
    def rewrite_carry(state: OccupationState, kind: Kind, sign: Sign, j: int, times: int = 1) -> OccupationState:
        """Replace ``2 * times`` equal particles at j by ``times`` at j + 1: 2**j + 2**j = 2**(j+1)."""
        kind, sign = Kind(kind), Sign(sign)
        found = state.count(kind, sign, j)
        if times < 1 or found < 2 * times:
            raise RuleNotApplicable(
                f"carry {kind.value}{sign.symbol}@{j} x{times} needs {2 * times} particles, found {found}"
            )
        return state.adjust([(kind, sign, j, -2 * times), (kind, sign, j + 1, times)])

    @staticmethod
    def rewrite_borrow(state: OccupationState, kind: Kind, j: int, k: int, sign: Sign | None = None) -> OccupationState:
        """
        Trade a dominant particle at j and an opposite one at k < j for a run
        of dominant particles on k .. j-1: 2**j - 2**k = sum(2**i, k <= i < j).

        Args:
            sign: dominant sign at j. Inferred from the counts when omitted;
                an inference with both signs possible is rejected.
        """
        kind = Kind(kind)
        sign = RewriteService.resolve_borrow_sign(state, kind, j, k, sign)
        changes = [(kind, sign, j, -1), (kind, sign.opposite, k, -1)]
        changes.extend((kind, sign, site, 1) for site in range(k, j))
        return state.adjust(changes)

    @staticmethod
    def resolve_borrow_sign(state: OccupationState, kind: Kind, j: int, k: int, sign: Sign | None = None) -> Sign:
        """Check the borrow precondition and return the dominant sign at j."""
        if k >= j:
            raise RuleNotApplicable(f"borrow {kind.value}@{j}>{k} needs k < j")
        candidates = [
            s for s in (Sign.PLUS, Sign.MINUS)
            if state.count(kind, s, j) >= 1 and state.count(kind, s.opposite, k) >= 1
        ]
        if sign is None:
            if len(candidates) != 1:
                reason = 'no opposite-sign pair' if not candidates else 'ambiguous dominant sign'
                raise RuleNotApplicable(f"borrow {kind.value}@{j}>{k}: {reason}")
            return candidates[0]
        if Sign(sign) not in candidates:
            raise RuleNotApplicable(
                f"borrow {kind.value}{Sign(sign).symbol}@{j}>{k}: no opposite-sign pair"
            )
        return Sign(sign)

    @staticmethod
    def apply_step(state: OccupationState, step: RewriteStep) -> OccupationState:
        if step.rule == Rule.CANCEL:
            return RewriteService.rewrite_cancel(state, step.kind, step.j, step.times)
        if step.rule == Rule.CARRY:
            return RewriteService.rewrite_carry(state, step.kind, step.sign, step.j, step.times)
        result = state
        for _ in range(step.times):
            result = RewriteService.rewrite_borrow(result, step.kind, step.j, step.k, step.sign)
        return result

    @staticmethod
    def replay(state: OccupationState, steps: Iterable[RewriteStep]) -> OccupationState:
        for step in steps:
            state = RewriteService.apply_step(state, step)
        return state

    @staticmethod
    def random_normalization(state: OccupationState, rng) -> OccupationState:
        """
        Apply randomly chosen single rewrites until none applies (a maximal sequence).

        The rule is drawn first and then one of its applications, so the many
        borrow pairs of a large state do not crowd out cancel and carry.
        """
        while True:
            options: dict[Rule, list[RewriteStep]] = {}
            for step in RewriteService.applicable_rewrites(state):
                options.setdefault(step.rule, []).append(step)
            if not options:
                return state
            rule = rng.choice(sorted(options, key=lambda r: r.value))
            state = RewriteService.apply_step(state, rng.choice(options[rule]))

    @staticmethod
    def applicable_rewrites(state: OccupationState) -> list[RewriteStep]:
        """Every single rule application available on the state."""
        steps = []
        for j, occupancy in state.items():
            for kind in Kind:
                plus = occupancy[slot(kind, Sign.PLUS)]
                minus = occupancy[slot(kind, Sign.MINUS)]
                if plus and minus:
                    steps.append(RewriteStep(Rule.CANCEL, kind, j))
                for sign, found in ((Sign.PLUS, plus), (Sign.MINUS, minus)):
                    if found >= 2:
                        steps.append(RewriteStep(Rule.CARRY, kind, j, sign))
        for kind in Kind:
            for sign in (Sign.PLUS, Sign.MINUS):
                lower = state.occupied_sites(kind, sign.opposite)
                for j in state.occupied_sites(kind, sign):
                    steps.extend(RewriteStep(Rule.BORROW, kind, j, sign, k) for k in lower if k < j)
        return steps


# ============================================================
# REDUCTION SERVICES
# ============================================================

class ReductionService:
    """Standard-form recognition and the rewrite-based reduction."""

    @staticmethod
    def is_standard(state: OccupationState) -> tuple[bool, StandardForm | None]:
        """
        True when at most one sign per kind occurs and every count is 1.

        Returns:
            (True, StandardForm) for standard states, (False, None) otherwise.
        """
        signs = {Kind.A: set(), Kind.B: set()}
        for _, occupancy in state.items():
            for index, (kind, sign) in enumerate(SLOTS):
                if occupancy[index] > 1:
                    return False, None
                if occupancy[index]:
                    signs[kind].add(sign)
        if len(signs[Kind.A]) > 1 or len(signs[Kind.B]) > 1:
            return False, None
        alpha = next(iter(signs[Kind.A]), Sign.PLUS)
        beta = next(iter(signs[Kind.B]), Sign.PLUS)
        form = StandardForm(
            alpha, state.occupied_sites(Kind.A), beta, state.occupied_sites(Kind.B),
        )
        return True, form

    @staticmethod
    def _saturate(state: OccupationState, steps: list[RewriteStep]) -> OccupationState:
        # Ascending scan; carries only move mass upward, so one pass leaves at
        # most one particle per kind at every site.
        pending = state.occupied_sites()
        index = 0
        while index < len(pending):
            j = pending[index]
            index += 1
            for kind in Kind:
                plus = state.count(kind, Sign.PLUS, j)
                minus = state.count(kind, Sign.MINUS, j)
                if plus and minus:
                    times = min(plus, minus)
                    state = RewriteService.rewrite_cancel(state, kind, j, times)
                    steps.append(RewriteStep(Rule.CANCEL, kind, j, times=times))
                for sign in (Sign.PLUS, Sign.MINUS):
                    found = state.count(kind, sign, j)
                    if found >= 2:
                        state = RewriteService.rewrite_carry(state, kind, sign, j, found // 2)
                        steps.append(RewriteStep(Rule.CARRY, kind, j, sign, times=found // 2))
                        if index >= len(pending) or pending[index] != j + 1:
                            pending.insert(index, j + 1)
        return state

    @staticmethod
    def reduction_trace(state: OccupationState) -> tuple[StandardForm, list[RewriteStep]]:
        """
        Reduce to standard form, recording each rewrite step.

        Phases: saturate cancel and carry; take each kind's dominant sign from
        its highest occupied site; borrow from the lowest dominant site above
        the highest minority site, re-saturating after every borrow.
        """
        expected = state_value_parts(state)
        steps: list[RewriteStep] = []
        state = ReductionService._saturate(state, steps)
        for kind in Kind:
            while True:
                plus_sites = state.occupied_sites(kind, Sign.PLUS)
                minus_sites = state.occupied_sites(kind, Sign.MINUS)
                if not plus_sites or not minus_sites:
                    break
                dominant = Sign.PLUS if plus_sites[-1] > minus_sites[-1] else Sign.MINUS
                dominant_sites, minority_sites = (
                    (plus_sites, minus_sites) if dominant == Sign.PLUS else (minus_sites, plus_sites)
                )
                k = minority_sites[-1]
                j = next(site for site in dominant_sites if site > k)
                state = RewriteService.rewrite_borrow(state, kind, j, k, dominant)
                steps.append(RewriteStep(Rule.BORROW, kind, j, dominant, k))
                state = ReductionService._saturate(state, steps)

        standard, form = ReductionService.is_standard(state)
        if not standard:
            raise InvariantBreach(f"Reduction stopped on a nonstandard state {state!r}")
        if state_value_parts(state) != expected:
            raise InvariantBreach(f"Reduction changed the value of the state to {state!r}")
        logger.debug(f"Reduced to {form} in {len(steps)} steps")
        return form, steps

    @staticmethod
    def reduce_to_standard(state: OccupationState) -> StandardForm:
        form, _ = ReductionService.reduction_trace(state)
        return form

    @staticmethod
    def n_equal(x: OccupationState, y: OccupationState) -> bool:
        """Numerical equality: same standard form, which must agree with equal values."""
        same_form = ReductionService.reduce_to_standard(x) == ReductionService.reduce_to_standard(y)
        same_value = state_value_parts(x) == state_value_parts(y)
        if same_form != same_value:
            raise InvariantBreach(f"N-equality and value equality disagree for {x!r} and {y!r}")
        return same_form
