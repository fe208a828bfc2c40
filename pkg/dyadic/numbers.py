"""
Exact dyadic rationals and their Gaussian (complex) extension.

A dyadic is ``numerator * 2**exponent``. Instances are kept canonical on
construction (odd numerator, or zero with exponent 0), so equality of fields
is equality of values.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from functools import total_ordering

from django.conf import settings
from rest_framework.exceptions import ValidationError

from .exceptions import ExponentOverflow, FloatOverflow


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    @property
    def symbol(self) -> str:
        return '+' if self is Sign.PLUS else '-'

    @property
    def opposite(self) -> 'Sign':
        return Sign(-self.value)

    @classmethod
    def from_symbol(cls, symbol: str) -> 'Sign':
        return cls.PLUS if symbol == '+' else cls.MINUS


class Axis(str, Enum):
    REAL = 'real'
    IMAGINARY = 'imaginary'


def check_exponent(exponent: int) -> int:
    """Raise ExponentOverflow when an exponent or site leaves the configured range."""
    limit = settings.NUMSTATES['SITE_LIMIT']
    if not -limit <= exponent <= limit:
        raise ExponentOverflow(f"Exponent {exponent} exceeds the supported range of ±{limit}.")
    return exponent


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    numerator: int = 0
    exponent: int = 0

    def __post_init__(self):
        numerator = self.numerator
        if numerator == 0:
            object.__setattr__(self, 'exponent', 0)
            return
        shift = (numerator & -numerator).bit_length() - 1
        if shift:
            object.__setattr__(self, 'numerator', numerator >> shift)
            object.__setattr__(self, 'exponent', self.exponent + shift)
        check_exponent(self.exponent)

    # ---------------------------
    # Constructors
    # ---------------------------
    @classmethod
    def power(cls, j: int, sign: Sign = Sign.PLUS) -> 'Dyadic':
        return cls(int(sign), check_exponent(j))

    @classmethod
    def from_fraction(cls, value: Fraction) -> 'Dyadic':
        value = Fraction(value)
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise ValidationError(f"{value} is not a dyadic rational.")
        return cls(value.numerator, -(denominator.bit_length() - 1))

    # ---------------------------
    # Arithmetic
    # ---------------------------
    def __add__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        if self.numerator == 0:
            return other
        if other.numerator == 0:
            return self
        low = min(self.exponent, other.exponent)
        total = (self.numerator << (self.exponent - low)) + (other.numerator << (other.exponent - low))
        return Dyadic(total, low)

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __sub__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self + (-other)

    def __lt__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        return (self - other).numerator < 0

    def __bool__(self):
        return self.numerator != 0

    def __float__(self):
        # magnitude lies in [2**(top - 1), 2**top)
        top = self.numerator.bit_length() + self.exponent
        if top < -1075:
            return 0.0
        overflow = FloatOverflow(f"{self.numerator} * 2**{self.exponent} is too large for a floating-point value")
        if top > 1024:
            raise overflow
        try:
            return float(self.as_fraction())
        except OverflowError:
            raise overflow from None

    def as_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.numerator << self.exponent)
        return Fraction(self.numerator, 1 << -self.exponent)

    @property
    def sign(self) -> Sign:
        return Sign.MINUS if self.numerator < 0 else Sign.PLUS

    def sites(self) -> frozenset[int]:
        """Sites j with 2**j in the binary expansion of the magnitude."""
        magnitude = abs(self.numerator)
        found = set()
        position = 0
        while magnitude:
            if magnitude & 1:
                found.add(self.exponent + position)
            magnitude >>= 1
            position += 1
        return frozenset(found)

    def __str__(self):
        fraction = self.as_fraction()
        if fraction.denominator == 1:
            return str(fraction.numerator)
        return f"{fraction.numerator}/{fraction.denominator}"


@dataclass(frozen=True)
class GaussianDyadic:
    re: Dyadic = Dyadic()
    im: Dyadic = Dyadic()

    @classmethod
    def from_power(cls, sign: Sign, j: int, axis: Axis = Axis.REAL) -> 'GaussianDyadic':
        part = Dyadic.power(j, sign)
        if axis == Axis.IMAGINARY:
            return cls(Dyadic(), part)
        return cls(part, Dyadic())

    @classmethod
    def from_fractions(cls, re=0, im=0) -> 'GaussianDyadic':
        return cls(Dyadic.from_fraction(Fraction(re)), Dyadic.from_fraction(Fraction(im)))

    def __add__(self, other):
        if not isinstance(other, GaussianDyadic):
            return NotImplemented
        return GaussianDyadic(self.re + other.re, self.im + other.im)

    def __neg__(self):
        return GaussianDyadic(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, GaussianDyadic):
            return NotImplemented
        return self + (-other)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return f"({self.re}, {self.im})"


ZERO = GaussianDyadic()
