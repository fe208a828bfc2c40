"""
Fermion creation-operator strings.

A string is kept in canonical order: sites ascending left to right, and
within a site the blocks a+, a-, b+, b- with h decreasing inside a block,
e.g. ``a+@0:2 a+@0:1 b-@0:1 a+@3:1``. ``phase`` is the sign picked up
while bringing a written product into that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from rest_framework.exceptions import ValidationError

from bosons.states import Kind, slot
from dyadic.numbers import Sign


class FermionMode(NamedTuple):
    kind: Kind
    sign: Sign
    h: int
    j: int

    @property
    def canonical_key(self) -> tuple[int, int, int]:
        return self.j, slot(self.kind, self.sign), -self.h

    @property
    def block(self) -> tuple[Kind, Sign, int]:
        return self.kind, self.sign, self.j

    def label(self) -> str:
        return f"{self.kind.value}{self.sign.symbol}@{self.j}:{self.h}"


def same_kind_inversions(modes: Iterable[FermionMode]) -> int:
    """Transpositions needed to sort the modes, counting only same-kind swaps (a and b commute)."""
    inversions = 0
    seen: list[FermionMode] = []
    for mode in modes:
        inversions += sum(
            1 for earlier in seen
            if earlier.kind == mode.kind and earlier.canonical_key > mode.canonical_key
        )
        seen.append(mode)
    return inversions


@dataclass(frozen=True)
class FermionString:
    """
    Canonically ordered modes with an overall phase.

    Any h >= 1 is allowed here, so a string may have holes (has_holes).
    Literal parsing and reduction accept only hole-free strings.
    """

    modes: tuple[FermionMode, ...] = ()
    phase: int = 1

    def __post_init__(self):
        modes = tuple(FermionMode(Kind(m.kind), Sign(m.sign), int(m.h), int(m.j)) for m in self.modes)
        if self.phase not in (1, -1):
            raise ValidationError(f"Phase must be +1 or -1, got {self.phase}")
        if any(m.h < 1 for m in modes):
            raise ValidationError('Fermion index h must be at least 1')
        if len(set(modes)) != len(modes):
            raise ValidationError('Repeated fermion mode in a string')
        if list(modes) != sorted(modes, key=lambda m: m.canonical_key):
            raise ValidationError('Fermion modes are not in canonical order')
        object.__setattr__(self, 'modes', modes)

    @classmethod
    def empty(cls) -> 'FermionString':
        return cls((), 1)

    @classmethod
    def from_written(cls, modes: Iterable[FermionMode], phase: int = 1) -> 'FermionString':
        """Canonicalize a written product; the phase absorbs the same-kind transpositions."""
        written = list(modes)
        if same_kind_inversions(written) % 2:
            phase = -phase
        return cls(tuple(sorted(written, key=lambda m: m.canonical_key)), phase)

    def block_hs(self, kind: Kind, sign: Sign, j: int) -> list[int]:
        return [m.h for m in self.modes if m.block == (kind, sign, j)]

    def has_holes(self) -> bool:
        """True when some block's h values are not exactly 1..count."""
        blocks: dict[tuple, list[int]] = {}
        for mode in self.modes:
            blocks.setdefault(mode.block, []).append(mode.h)
        return any(sorted(hs) != list(range(1, len(hs) + 1)) for hs in blocks.values())

    def __len__(self):
        return len(self.modes)

    def __str__(self):
        return ' '.join(m.label() for m in self.modes) if self.modes else 'vacuum'
