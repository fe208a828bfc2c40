"""
Binary-literal grammar: ``[-] bits [ '.' bits ]`` for a real part, the same
with an ``i`` after the sign for an imaginary part, and ``real, imag`` for both,
e.g. ``10100.0011``, ``-i111.1``, ``10.11, -i111.1``.
"""

import logging

import pyparsing as pp

from .exceptions import LiteralParseError
from .numbers import Dyadic, GaussianDyadic

logger = logging.getLogger(__name__)


BINARY_PART = pp.Regex(
    r"(?P<negative>-)?(?P<imaginary>i)?(?P<integer>[01]+)(?:\.(?P<fraction>[01]+))?"
).set_name('binary part')

BINARY_LITERAL = (BINARY_PART + pp.Optional(pp.Suppress(',') + BINARY_PART)).set_name('binary literal')


def looks_binary(text: str) -> bool:
    """True when the text can only be meant as a binary literal."""
    stripped = text.strip()
    return bool(stripped) and '@' not in stripped and stripped != 'vacuum'


def _part_value(match) -> tuple[bool, Dyadic]:
    integer = match['integer']
    fraction = match.get('fraction') or ''
    magnitude = int(integer + fraction, 2)
    if match.get('negative'):
        magnitude = -magnitude
    return bool(match.get('imaginary')), Dyadic(magnitude, -len(fraction))


def parse_binary(text: str) -> GaussianDyadic:
    """
    Parse a binary literal into its exact value.

    Raises:
        LiteralParseError: with the failing column when the text does not
            match, or when a real or imaginary part is given twice.
    """
    try:
        result = BINARY_LITERAL.parse_string(text.strip(), parse_all=True)
    except pp.ParseException as exc:
        logger.warning(f"Rejected binary literal {text!r}: {exc.msg}")
        raise LiteralParseError(f"Invalid binary literal: {exc.msg}", position=exc.loc)

    re_part = im_part = None
    for token in result:
        is_imaginary, value = _part_value(BINARY_PART.parse_string(token))
        if is_imaginary:
            if im_part is not None:
                raise LiteralParseError('Imaginary part given twice')
            im_part = value
        else:
            if re_part is not None:
                raise LiteralParseError('Real part given twice')
            re_part = value
    return GaussianDyadic(re_part or Dyadic(), im_part or Dyadic())
