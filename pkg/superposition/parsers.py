"""
Superposition literal: ``amp '(' state ')' ( ('+'|'-') amp '(' state ')' )*``
with ``amp`` a decimal or ``1/sqrt(N)``, e.g.
``1/sqrt(2)(a+@7 a-@6 b-@4) + 1/sqrt(2)(a-@-2 b-@6)``.
The state inside the parentheses may also be a binary literal.
"""

import logging
import math

import pyparsing as pp

from bosons.exceptions import LiteralParseError
from bosons.parsers import parse_literal

from .registers import Superposition

logger = logging.getLogger(__name__)


AMPLITUDE = pp.Regex(r"1/sqrt\(\d+(?:\.\d+)?\)|-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?").set_name('amplitude')
TERM = pp.Group(
    AMPLITUDE('amp') + pp.Suppress('(') + pp.Regex(r"[^()]+")('state') + pp.Suppress(')')
)
SUPERPOSITION = (TERM + pp.ZeroOrMore(pp.one_of('+ -') + TERM)).set_name('superposition literal')


def _amplitude(text: str) -> float:
    if text.startswith('1/sqrt('):
        radicand = float(text[len('1/sqrt('):-1])
        if radicand <= 0:
            raise LiteralParseError(f"Amplitude {text} is not finite")
        return 1.0 / math.sqrt(radicand)
    return float(text)


def parse_superposition(text: str) -> Superposition:
    """
    Parse a superposition literal; repeated basis states add their amplitudes.

    Raises:
        LiteralParseError: for grammar errors, positioned at the failing column.
    """
    try:
        result = SUPERPOSITION.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        logger.warning(f"Rejected superposition literal {text!r}: {exc.msg}")
        raise LiteralParseError(f"Invalid superposition literal: {exc.msg}", position=exc.loc)

    terms = []
    sign = 1.0
    for item in result:
        if isinstance(item, str):
            sign = -1.0 if item == '-' else 1.0
            continue
        amplitude = sign * _amplitude(item['amp'])
        terms.append((parse_literal(item['state'].strip()), amplitude))
        sign = 1.0
    return Superposition(terms)
