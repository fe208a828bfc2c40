"""
Textual state grammar.

    token := kind sign '@' site ( '^' count | ':' h )?
    state := token (whitespace token)* | 'vacuum'

e.g. ``a+@2 a-@0 b-@3 b+@-1 a-@-2``. The ``:h`` form is the fermion
extension; a boson reading forgets h and counts the token once.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import pyparsing as pp

from dyadic.numbers import Sign
from dyadic.parsers import looks_binary, parse_binary

from .exceptions import LiteralParseError
from .services import RewriteStep, Rule
from .states import SLOTS, Kind, OccupationState, StandardForm

logger = logging.getLogger(__name__)


TOKEN = pp.Regex(
    r"(?P<kind>[ab])(?P<sign>[+-])@(?P<site>-?\d+)(?:\^(?P<count>\d+)|:(?P<h>\d+))?(?=\s|$)"
).set_name('state token')

STATE = (pp.Keyword('vacuum') | pp.OneOrMore(TOKEN)).set_name('state literal')

TRACE_LINE = pp.Regex(
    r"(?P<rule>cancel|carry|borrow) (?P<kind>[ab])(?P<sign>[+-])?@(?P<j>-?\d+)(?:>(?P<k>-?\d+))? x(?P<times>\d+)"
) + pp.Optional(pp.Regex(r"=.*"))


class Token(NamedTuple):
    kind: Kind
    sign: Sign
    site: int
    count: int
    h: int | None
    position: int


def parse_tokens(text: str) -> list[Token]:
    """
    Parse a state literal into its written tokens, in order.

    Raises:
        LiteralParseError: carrying the 0-based column of the failure.
    """
    try:
        STATE.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        logger.warning(f"Rejected state literal {text!r}: {exc.msg}")
        raise LiteralParseError(f"Invalid state literal: {exc.msg}", position=exc.loc)

    tokens = []
    for match, start, _ in TOKEN.scan_string(text):
        count = int(match['count']) if match.get('count') else 1
        h = int(match['h']) if match.get('h') else None
        if count < 1:
            raise LiteralParseError('Token count must be at least 1', position=start)
        if h is not None and h < 1:
            raise LiteralParseError('Fermion index h must be at least 1', position=start)
        tokens.append(Token(
            Kind(match['kind']), Sign.from_symbol(match['sign']), int(match['site']), count, h, start,
        ))
    return tokens


def parse_state(text: str) -> OccupationState:
    counts: dict[int, list[int]] = {}
    for token in parse_tokens(text):
        index = SLOTS.index((token.kind, token.sign))
        counts.setdefault(token.site, [0, 0, 0, 0])[index] += token.count
    return OccupationState(counts)


def parse_literal(text: str) -> OccupationState:
    """A state literal, or a binary literal read as its standard state."""
    if looks_binary(text):
        return StandardForm.from_value(parse_binary(text)).to_state()
    return parse_state(text)


def render_state(state: OccupationState) -> str:
    """Occupation rendering: sites descending, a+ a- b+ b- within a site, ``^count`` above 1."""
    if state.is_vacuum:
        return 'vacuum'
    tokens = []
    for j, occupancy in reversed(state.items()):
        for (kind, sign), count in zip(SLOTS, occupancy):
            if count:
                suffix = f"^{count}" if count > 1 else ''
                tokens.append(f"{kind.value}{sign.symbol}@{j}{suffix}")
    return ' '.join(tokens)


def render_standard(form: StandardForm) -> str:
    return render_state(form.to_state())


def parse_trace_line(line: str) -> RewriteStep:
    try:
        match = TRACE_LINE.parse_string(line.strip(), parse_all=True)
    except pp.ParseException as exc:
        raise LiteralParseError(f"Invalid trace line: {exc.msg}", position=exc.loc)
    sign = Sign.from_symbol(match['sign']) if match.get('sign') else None
    k = int(match['k']) if match.get('k') else None
    return RewriteStep(Rule(match['rule']), Kind(match['kind']), int(match['j']), sign, k, int(match['times']))
