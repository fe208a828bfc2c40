"""
Randomized property checks of the whole engine against the dyadic oracle.

Generators take an explicit ``random.Random`` so a seed reproduces a run.
Each check returns a CheckResult listing counterexamples instead of
raising, so one failing property does not hide the others.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from django.conf import settings

from bosons.services import OccupationService, ReductionService, RewriteService
from bosons.states import SLOTS, ZERO_VECTOR, OccupationState, StandardForm
from dyadic.numbers import Dyadic, GaussianDyadic, Sign
from dyadic.services import DyadicService
from fermions.services import FermionRewriteService, FermionService
from fermions.strings import FermionMode, FermionString
from superposition.registers import Superposition
from superposition.services import SuperpositionService

from .services import NumioService

logger = logging.getLogger(__name__)


# ============================================================
# GENERATORS
# ============================================================

def gen_dyadic(rng: random.Random, bits: int = 64, span: int = 32) -> Dyadic:
    """|numerator| < 2**bits with exponent in [-span, span]."""
    return Dyadic(rng.randrange(-(1 << bits) + 1, 1 << bits), rng.randint(-span, span))


def gen_gaussian(rng: random.Random) -> GaussianDyadic:
    return GaussianDyadic(gen_dyadic(rng), gen_dyadic(rng))


def gen_state(rng: random.Random, max_sites: int = 6, max_count: int = 8, span: int = 16) -> OccupationState:
    """Up to ``max_sites`` occupied sites in [-span, span], each count at most ``max_count``."""
    sites = rng.sample(range(-span, span + 1), rng.randint(0, max_sites))
    counts = {}
    for j in sites:
        occupancy = [rng.randint(0, max_count) for _ in SLOTS]
        if not any(occupancy):
            occupancy[rng.randrange(len(SLOTS))] = 1
        counts[j] = occupancy
    return OccupationState(counts)


def gen_standard(rng: random.Random, max_sites: int = 6, span: int = 16) -> StandardForm:
    sites = list(range(-span, span + 1))
    return StandardForm(
        rng.choice(list(Sign)), rng.sample(sites, rng.randint(0, max_sites)),
        rng.choice(list(Sign)), rng.sample(sites, rng.randint(0, max_sites)),
    )


def gen_superposition(rng: random.Random, max_terms: int = 8, span: int = 8) -> Superposition:
    """A normalized superposition of up to ``max_terms`` small basis states."""
    while True:
        terms = {
            gen_state(rng, max_sites=3, max_count=2, span=span): complex(rng.gauss(0, 1), rng.gauss(0, 1))
            for _ in range(rng.randint(1, max_terms))
        }
        x = Superposition(terms)
        if len(x) and x.norm_squared() > 1e-6:
            return SuperpositionService.normalized(x)


def gen_written_modes(rng: random.Random, size: int = 8, span: int = 4) -> list[FermionMode]:
    """Distinct fermion modes in random written order."""
    modes = set()
    while len(modes) < size:
        kind, sign = rng.choice(SLOTS)
        modes.add(FermionMode(kind, sign, rng.randint(1, 3), rng.randint(-span, span)))
    written = list(modes)
    rng.shuffle(written)
    return written


# ============================================================
# CHECKS
# ============================================================

@dataclass
class CheckResult:
    name: str
    samples: int
    failed: int = 0
    examples: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def fail(self, message: str):
        self.failed += 1
        if len(self.examples) < 5:
            self.examples.append(message)

    def summary(self) -> str:
        status = 'ok' if self.passed else f"FAILED {self.failed}x, first: {self.examples[0]}"
        return f"{self.name}: {status} [{self.samples} samples]"


def check_dyadic(rng: random.Random, samples: int) -> CheckResult:
    """Canonical form is idempotent and standard sites round-trip; addition commutes and associates."""
    add = DyadicService.dy_add
    result = CheckResult('dyadic arithmetic', samples)
    for _ in range(samples):
        d = gen_dyadic(rng)
        shift = rng.randint(0, 8)
        if Dyadic(d.numerator, d.exponent) != d or Dyadic(d.numerator << shift, d.exponent - shift) != d:
            result.fail(f"canonical form of {d!r} is not stable")

        x, y, z = gen_gaussian(rng), gen_gaussian(rng), gen_gaussian(rng)
        if DyadicService.dy_from_standard_sites(*DyadicService.dy_to_standard_sites(x)) != x:
            result.fail(f"standard sites of {x} do not round-trip")
        if add(x, y) != add(y, x):
            result.fail(f"{x} + {y} is not commutative")
        if add(add(x, y), z) != add(x, add(y, z)):
            result.fail(f"({x} + {y}) + {z} is not associative")
    return result


def check_morphism(rng: random.Random, samples: int) -> CheckResult:
    """Reduction and every one of its steps preserve the value; the result is the oracle's."""
    result = CheckResult('morphism', samples)
    for _ in range(samples):
        state = gen_state(rng)
        value = OccupationService.value(state)
        form, steps = ReductionService.reduction_trace(state)
        if form.value() != value:
            result.fail(f"value changed for {state!r}")
        if form != StandardForm(*DyadicService.dy_to_standard_sites(value)):
            result.fail(f"form differs from the oracle for {state!r}")
        current = state
        for step in steps:
            current = RewriteService.apply_step(current, step)
            if OccupationService.value(current) != value:
                result.fail(f"step {step.describe()} changed the value of {state!r}")
                break
    return result


def check_confluence(rng: random.Random, samples: int, orders: int = 10) -> CheckResult:
    result = CheckResult('confluence', samples)
    for _ in range(samples):
        state = gen_state(rng)
        expected = ReductionService.reduce_to_standard(state)
        for _ in range(orders):
            final = RewriteService.random_normalization(state, rng)
            standard, form = ReductionService.is_standard(final)
            if not standard or form != expected:
                result.fail(f"random order ended on {final!r} for {state!r}")
                break
    return result


def check_addition(rng: random.Random, samples: int) -> CheckResult:
    result = CheckResult('addition homomorphism', samples)
    for _ in range(samples):
        u, v = gen_standard(rng), gen_standard(rng)
        total = OccupationService.accumulate([u.to_state(), v.to_state()])
        oracle = DyadicService.dy_add(u.value(), v.value())
        if OccupationService.value(total) != oracle:
            result.fail(f"value of {u} + {v}")
        elif ReductionService.reduce_to_standard(total) != StandardForm(*DyadicService.dy_to_standard_sites(oracle)):
            result.fail(f"reduction of {u} + {v}")
    return result


def check_subtraction(rng: random.Random, samples: int) -> CheckResult:
    result = CheckResult('subtraction inverse', samples)
    for _ in range(samples):
        x = Superposition.basis(gen_standard(rng).to_state())
        for (_, _, third), _ in SuperpositionService.op_subtract(x, x).items():
            if not ReductionService.reduce_to_standard(third).is_vacuum:
                result.fail(f"x - x is not vacuum for {third!r}")
    return result


def check_trace_additivity(rng: random.Random, samples: int) -> CheckResult:
    tolerance = settings.NUMSTATES['EXPECTATION_TOLERANCE']
    result = CheckResult('trace additivity', samples)
    for _ in range(samples):
        residual = SuperpositionService.additivity_residual(gen_superposition(rng), gen_superposition(rng))
        if not residual < tolerance:
            result.fail(f"residual {residual:.3g}")
    return result


def check_fermions(rng: random.Random, samples: int) -> CheckResult:
    """Nilpotency, transposition phases, agreement with boson reduction, h-independence of the value."""
    result = CheckResult('fermion suite', samples)
    for _ in range(samples):
        state = gen_state(rng, max_sites=4, max_count=4, span=8)
        s = FermionService.f_from_counts(state)

        for mode in s.modes[:3]:
            if FermionService.f_apply_creation(s, mode) is not ZERO_VECTOR:
                result.fail(f"creating occupied {mode.label()} did not vanish")

        written = gen_written_modes(rng)
        i = rng.randrange(len(written) - 1)
        swapped = written[:i] + [written[i + 1], written[i]] + written[i + 2:]
        before, after = FermionString.from_written(written), FermionString.from_written(swapped)
        flips = written[i].kind == written[i + 1].kind
        if after.phase != (-before.phase if flips else before.phase):
            result.fail(f"transposition phase at {i} of {[m.label() for m in written]}")
        if FermionString.from_written(swapped[:i] + [swapped[i + 1], swapped[i]] + swapped[i + 2:]) != before:
            result.fail('swapping twice did not restore the string')

        if FermionRewriteService.f_reduce_to_standard(s) != ReductionService.reduce_to_standard(state):
            result.fail(f"fermion and boson reductions differ for {state!r}")

        relabeled = [FermionMode(m.kind, m.sign, m.h + rng.randint(0, 2) * 10, m.j) for m in s.modes]
        if len(set(relabeled)) == len(relabeled):
            t = FermionString.from_written(relabeled)
            if FermionService.f_value(t) != FermionService.f_value(s):
                result.fail('relabeling h changed the value')
    return result


def check_approximation(k_values=range(2, 21)) -> CheckResult:
    third = Fraction(1, 3)
    result = CheckResult('approximation of 1/3', len(k_values))
    for k in k_values:
        form, _ = NumioService.approximate(1, 3, k)
        value = form.value().re.as_fraction()
        if abs(value - third) > Fraction(1, 2 ** k):
            result.fail(f"k={k} misses by {abs(value - third)}")
        if value == third:
            result.fail(f"k={k} hit 1/3 exactly")
    return result


def run_all(seed: int, samples: int, log: Callable[[str], None] | None = None) -> list[CheckResult]:
    """
    Run every property with ``samples`` as the base size; the costlier
    confluence, subtraction and trace checks use a tenth of it.
    """
    rng = random.Random(seed)
    small = max(1, samples // 10)
    plan = [
        lambda: check_dyadic(rng, samples),
        lambda: check_morphism(rng, samples),
        lambda: check_confluence(rng, small),
        lambda: check_addition(rng, samples),
        lambda: check_subtraction(rng, small),
        lambda: check_trace_additivity(rng, small),
        lambda: check_fermions(rng, samples),
        lambda: check_approximation(),
    ]
    results = []
    for run in plan:
        outcome = run()
        results.append(outcome)
        if log is not None:
            log(outcome.summary())
        if not outcome.passed:
            logger.error(f"Self-test {outcome.name} failed: {outcome.examples}")
    passed = sum(1 for r in results if r.passed)
    logger.info(f"Self-test with seed {seed}: {passed}/{len(results)} properties hold")
    return results


