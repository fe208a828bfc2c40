"""
Gaussian-dyadic arithmetic and rendering.

This is the codomain of the number operator and the brute-force oracle the
state engines are checked against, so nothing here knows about states.
"""

import logging

from rest_framework.exceptions import ValidationError

from .numbers import Axis, Dyadic, GaussianDyadic, Sign

logger = logging.getLogger(__name__)


# ============================================================
# ARITHMETIC
# ============================================================

class DyadicService:
    """Exact operations on GaussianDyadic values."""

    @staticmethod
    def dy_add(x: GaussianDyadic, y: GaussianDyadic) -> GaussianDyadic:
        return x + y

    @staticmethod
    def dy_neg(x: GaussianDyadic) -> GaussianDyadic:
        return -x

    @staticmethod
    def dy_from_power(sign: Sign, j: int, axis: Axis = Axis.REAL) -> GaussianDyadic:
        """Return ``sign * 2**j`` on the requested axis."""
        return GaussianDyadic.from_power(Sign(sign), j, Axis(axis))

    @staticmethod
    def dy_to_standard_sites(x: GaussianDyadic):
        """
        Split a value into the signs and site sets of its binary expansion.

        Returns:
            (alpha, s, beta, t) with alpha * sum(2**j for j in s) == x.re and
            beta * sum(2**k for k in t) == x.im. An absent component has
            sign + and an empty set.
        """
        return x.re.sign, x.re.sites(), x.im.sign, x.im.sites()

    @staticmethod
    def dy_from_standard_sites(alpha: Sign, s, beta: Sign, t) -> GaussianDyadic:
        total = GaussianDyadic()
        for j in s:
            total = total + GaussianDyadic.from_power(alpha, j, Axis.REAL)
        for k in t:
            total = total + GaussianDyadic.from_power(beta, k, Axis.IMAGINARY)
        return total


# ============================================================
# RENDERING
# ============================================================

def _binary_magnitude(part: Dyadic) -> str:
    magnitude = abs(part.numerator)
    if part.exponent >= 0:
        return bin(magnitude)[2:] + '0' * part.exponent
    places = -part.exponent
    digits = bin(magnitude)[2:].rjust(places + 1, '0')
    return f"{digits[:-places]}.{digits[-places:]}"


def _decimal_magnitude(part: Dyadic) -> str:
    magnitude = abs(part.numerator)
    if part.exponent >= 0:
        return str(magnitude << part.exponent)
    places = -part.exponent
    digits = str(magnitude * 5 ** places).rjust(places + 1, '0')
    return f"{digits[:-places]}.{digits[-places:]}"


def _fraction_magnitude(part: Dyadic) -> str:
    return str(abs(part.as_fraction()))


def _join_complex(x: GaussianDyadic, magnitude) -> str:
    real = magnitude(x.re)
    imag = magnitude(x.im)
    if not x.re and not x.im:
        return '0'
    if not x.im:
        return f"-{real}" if x.re.numerator < 0 else real
    imag_text = f"{imag} i"
    if not x.re:
        return f"-{imag_text}" if x.im.numerator < 0 else imag_text
    real_text = f"-{real}" if x.re.numerator < 0 else real
    joiner = '-' if x.im.numerator < 0 else '+'
    return f"{real_text} {joiner} {imag_text}"


class RenderService:
    """Exact text renderings of GaussianDyadic values; nothing is rounded."""

    STYLES = ('binary', 'decimal', 'fraction')

    @staticmethod
    def render(x: GaussianDyadic, base: int = 2) -> str:
        """
        Render in binary (``base=2``) or decimal (``base=10``).

        Binary output is ``real[, imag]`` with the imaginary part prefixed
        by ``i``, e.g. ``10.11, -i111.1``; decimal output is ``2.75 - 7.5 i``.
        """
        if base == 2:
            return RenderService.render_binary(x)
        if base == 10:
            return _join_complex(x, _decimal_magnitude)
        logger.warning(f"Rejected render base {base}")
        raise ValidationError(f"Unsupported base {base}; use 2 or 10.")

    @staticmethod
    def render_binary(x: GaussianDyadic) -> str:
        parts = []
        if x.re:
            parts.append(('-' if x.re.numerator < 0 else '') + _binary_magnitude(x.re))
        if x.im:
            parts.append(('-' if x.im.numerator < 0 else '') + 'i' + _binary_magnitude(x.im))
        return ', '.join(parts) if parts else '0'

    @staticmethod
    def render_fraction(x: GaussianDyadic) -> str:
        return _join_complex(x, _fraction_magnitude)

    @staticmethod
    def render_style(x: GaussianDyadic, style: str) -> str:
        if style == 'binary':
            return RenderService.render_binary(x)
        if style == 'decimal':
            return RenderService.render(x, base=10)
        if style == 'fraction':
            return RenderService.render_fraction(x)
        raise ValidationError(f"Unknown render style '{style}'.")
