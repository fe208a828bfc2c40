"""
Superpositions of basis states, three-register products and traced mixtures.

Amplitudes and probabilities are floating point; the basis keys they
weight are exact states, so values never carry a tolerance.
"""

from __future__ import annotations

import math
from typing import Hashable, Iterable, Mapping

from django.conf import settings

from bosons.states import StandardForm

from .exceptions import AmplitudeError


def key_order(key) -> tuple:
    """Deterministic ordering for basis keys and tuples of them."""
    if isinstance(key, tuple):
        return tuple(key_order(part) for part in key)
    if hasattr(key, 'sort_key'):
        return (0, key.sort_key())
    return (1, str(key))


def _check_amplitude(amplitude) -> complex:
    amplitude = complex(amplitude)
    if not (math.isfinite(amplitude.real) and math.isfinite(amplitude.imag)):
        raise AmplitudeError(f"Amplitude {amplitude} is not finite")
    return amplitude


def _pruned(terms: Iterable[tuple[Hashable, complex]]) -> dict:
    threshold = settings.NUMSTATES['PRUNE_THRESHOLD']
    merged: dict = {}
    for key, amplitude in terms:
        merged[key] = merged.get(key, 0j) + _check_amplitude(amplitude)
    return {
        key: amplitude
        for key, amplitude in sorted(merged.items(), key=lambda item: key_order(item[0]))
        if abs(amplitude) >= threshold
    }


class _Register:
    __slots__ = ('_terms',)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self._terms = _pruned(items)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return list(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def norm_squared(self) -> float:
        return sum(abs(amplitude) ** 2 for amplitude in self._terms.values())

    def is_normalized(self, tolerance: float | None = None) -> bool:
        if tolerance is None:
            tolerance = settings.NUMSTATES['NORMALIZATION_TOLERANCE']
        return abs(self.norm_squared() - 1.0) <= tolerance

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self):
        return f"{type(self).__name__}({self._terms!r})"


class Superposition(_Register):
    """
    sum_k d_k |key_k> over distinct basis keys.

    Standard forms are stored as their occupation states, so a standard key
    and the equal stored state share one amplitude.
    """

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        super().__init__(
            (key.to_state() if isinstance(key, StandardForm) else key, amplitude)
            for key, amplitude in items
        )

    @classmethod
    def basis(cls, key) -> 'Superposition':
        return cls({key: 1.0})


class TripleRegister(_Register):
    """Entangled terms keyed by (first register, second register, third register)."""


class MixedState:
    """Diagonal density operator: distinct keys with positive probabilities summing to 1."""

    __slots__ = ('_components',)

    def __init__(self, components: Iterable[tuple[float, Hashable]]):
        components = [(float(p), key) for p, key in components]
        keys = [key for _, key in components]
        if len(set(keys)) != len(keys):
            raise AmplitudeError('Mixed-state keys must be distinct')
        for probability, key in components:
            if not math.isfinite(probability) or probability <= 0:
                raise AmplitudeError(f"Probability {probability} for {key!r} is not positive")
        total = sum(p for p, _ in components)
        if components and abs(total - 1.0) > settings.NUMSTATES['NORMALIZATION_TOLERANCE']:
            raise AmplitudeError(f"Probabilities sum to {total}, not 1")
        self._components = tuple(sorted(components, key=lambda c: key_order(c[1])))

    @property
    def components(self) -> tuple[tuple[float, Hashable], ...]:
        return self._components

    def total_probability(self) -> float:
        return math.fsum(p for p, _ in self._components)

    def __len__(self):
        return len(self._components)

    def __iter__(self):
        return iter(self._components)

    def __repr__(self):
        return f"MixedState({list(self._components)!r})"
