"""
Boson occupation-number states.

A state is a finitely supported map from lattice site j to the four counts
(n+, n-, m+, m-): real (a-type) and imaginary (b-type) systems of each sign.
All-zero sites are never stored, so two states are equal exactly when their
stored maps are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from rest_framework.exceptions import ValidationError

from dyadic.numbers import Dyadic, GaussianDyadic, Sign, check_exponent
from dyadic.services import DyadicService


class Kind(str, Enum):
    A = 'a'
    B = 'b'


class SiteOccupancy(NamedTuple):
    n_plus: int = 0
    n_minus: int = 0
    m_plus: int = 0
    m_minus: int = 0

    def count(self, kind: Kind, sign: Sign) -> int:
        return self[slot(kind, sign)]


# Factor order within one site: a+, a-, b+, b-.
SLOTS = (
    (Kind.A, Sign.PLUS),
    (Kind.A, Sign.MINUS),
    (Kind.B, Sign.PLUS),
    (Kind.B, Sign.MINUS),
)


def slot(kind: Kind, sign: Sign) -> int:
    return (0 if kind == Kind.A else 2) + (0 if sign == Sign.PLUS else 1)


EMPTY_SITE = SiteOccupancy()


class ZeroVector:
    """The null vector: an annihilated empty mode or a repeated fermion."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'ZERO_VECTOR'


ZERO_VECTOR = ZeroVector()


class OccupationState:
    """Immutable |n+, n-, m+, m-> basis state."""

    __slots__ = ('_sites', '_hash')

    def __init__(self, sites: Mapping[int, Iterable[int]] | None = None):
        cleaned = {}
        for j, counts in (sites or {}).items():
            occupancy = SiteOccupancy(*counts)
            if any(c < 0 for c in occupancy):
                raise ValidationError(f"Negative occupancy at site {j}: {tuple(occupancy)}")
            if any(occupancy):
                cleaned[check_exponent(int(j))] = SiteOccupancy(*(int(c) for c in occupancy))
        self._sites = cleaned
        self._hash = None

    @classmethod
    def _trusted(cls, sites: dict) -> 'OccupationState':
        state = cls.__new__(cls)
        state._sites = sites
        state._hash = None
        return state

    @classmethod
    def vacuum(cls) -> 'OccupationState':
        return cls._trusted({})

    # ---------------------------
    # Access
    # ---------------------------
    @property
    def sites(self) -> Mapping[int, SiteOccupancy]:
        return MappingProxyType(self._sites)

    def get(self, j: int) -> SiteOccupancy:
        return self._sites.get(j, EMPTY_SITE)

    def count(self, kind: Kind, sign: Sign, j: int) -> int:
        return self._sites.get(j, EMPTY_SITE)[slot(kind, sign)]

    def occupied_sites(self, kind: Kind | None = None, sign: Sign | None = None) -> list[int]:
        """Ascending sites holding at least one particle of the given kind/sign."""
        if kind is None:
            return sorted(self._sites)
        signs = (sign,) if sign is not None else (Sign.PLUS, Sign.MINUS)
        return sorted(
            j for j, occupancy in self._sites.items()
            if any(occupancy[slot(kind, s)] for s in signs)
        )

    def items(self):
        return sorted(self._sites.items())

    def particle_count(self) -> int:
        return sum(sum(occupancy) for occupancy in self._sites.values())

    @property
    def is_vacuum(self) -> bool:
        return not self._sites

    # ---------------------------
    # Derived states
    # ---------------------------
    def adjust(self, changes: Iterable[tuple[Kind, Sign, int, int]]) -> 'OccupationState':
        """Return a copy with each (kind, sign, site, delta) applied; counts must stay >= 0."""
        sites = dict(self._sites)
        for kind, sign, j, delta in changes:
            counts = list(sites.get(j, EMPTY_SITE))
            index = slot(kind, sign)
            counts[index] += delta
            if counts[index] < 0:
                raise ValidationError(f"Occupancy of {kind.value}{sign.symbol}@{j} would become negative")
            if any(counts):
                sites[check_exponent(j)] = SiteOccupancy(*counts)
            else:
                sites.pop(j, None)
        return OccupationState._trusted(sites)

    def negated(self) -> 'OccupationState':
        """Flip the sign of every particle (the additive inverse)."""
        return OccupationState._trusted({
            j: SiteOccupancy(o.n_minus, o.n_plus, o.m_minus, o.m_plus)
            for j, o in self._sites.items()
        })

    def sort_key(self) -> tuple:
        return tuple(self.items())

    # ---------------------------
    # Value semantics
    # ---------------------------
    def __eq__(self, other):
        if not isinstance(other, OccupationState):
            return NotImplemented
        return self._sites == other._sites

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._sites.items()))
        return self._hash

    def __repr__(self):
        inner = ', '.join(f"{j}: {tuple(o)}" for j, o in self.items())
        return f"OccupationState({{{inner}}})"


@dataclass(frozen=True)
class StandardForm:
    """|alpha s, beta t>: one sign per component, occupancy 0 or 1 per site."""
    alpha: Sign = Sign.PLUS
    s: frozenset = field(default_factory=frozenset)
    beta: Sign = Sign.PLUS
    t: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 's', frozenset(self.s))
        object.__setattr__(self, 't', frozenset(self.t))
        # An absent component carries sign + by convention.
        object.__setattr__(self, 'alpha', Sign(self.alpha) if self.s else Sign.PLUS)
        object.__setattr__(self, 'beta', Sign(self.beta) if self.t else Sign.PLUS)

    @classmethod
    def from_value(cls, value: GaussianDyadic) -> 'StandardForm':
        return cls(*DyadicService.dy_to_standard_sites(value))

    def value(self) -> GaussianDyadic:
        return DyadicService.dy_from_standard_sites(self.alpha, self.s, self.beta, self.t)

    def to_state(self) -> OccupationState:
        sites: dict[int, list[int]] = {}
        for j in self.s:
            sites.setdefault(j, [0, 0, 0, 0])[slot(Kind.A, self.alpha)] = 1
        for k in self.t:
            sites.setdefault(k, [0, 0, 0, 0])[slot(Kind.B, self.beta)] = 1
        return OccupationState(sites)

    @property
    def is_vacuum(self) -> bool:
        return not self.s and not self.t

    def __str__(self):
        s = '{' + ','.join(str(j) for j in sorted(self.s, reverse=True)) + '}'
        t = '{' + ','.join(str(k) for k in sorted(self.t, reverse=True)) + '}'
        return f"({self.alpha.symbol}, {s}, {self.beta.symbol}, {t})"


def state_value_parts(state: OccupationState) -> GaussianDyadic:
    """Eigenvalue of the number operator on a basis state, computed in one pass."""
    if state.is_vacuum:
        return GaussianDyadic()
    sites = state.sites
    low = min(sites)
    re = im = 0
    for j, o in sites.items():
        shift = j - low
        re += (o.n_plus - o.n_minus) << shift
        im += (o.m_plus - o.m_minus) << shift
    return GaussianDyadic(Dyadic(re, low), Dyadic(im, low))
