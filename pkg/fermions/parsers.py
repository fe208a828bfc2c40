"""
Fermion literals: the state grammar with optional ``:h`` labels,
e.g. ``a+@0:2 a+@0:1``. Tokens are read as a written operator product, so
the resulting phase is that of the permutation into canonical order.
Tokens without ``:h`` take the lowest free h of their block.
"""

import logging

from bosons.exceptions import LiteralParseError
from bosons.parsers import parse_tokens
from bosons.states import ZERO_VECTOR

from .services import FermionService
from .strings import FermionMode, FermionString

logger = logging.getLogger(__name__)


def has_fermion_labels(text: str) -> bool:
    return any(token.h is not None for token in parse_tokens(text))


def parse_fermion_literal(text: str):
    """
    Build a FermionString by applying the written creation operators in order.

    Returns:
        FermionString, or ZERO_VECTOR when a mode is written twice.

    Raises:
        LiteralParseError: for grammar errors or a result with holes in h.
    """
    current = FermionString.empty()
    for token in parse_tokens(text):
        for _ in range(token.count):
            h = token.h
            if h is None:
                occupied = set(current.block_hs(token.kind, token.sign, token.site))
                h = 1
                while h in occupied:
                    h += 1
            current = FermionService.f_apply_creation(current, FermionMode(token.kind, token.sign, h, token.site))
            if current is ZERO_VECTOR:
                logger.info(f"Fermion literal {text!r} repeats a mode at column {token.position + 1}")
                return ZERO_VECTOR
    if current.has_holes():
        raise LiteralParseError('Fermion h labels must run 1..count within each block')
    return current


def render_fermion(s) -> str:
    if s is ZERO_VECTOR:
        return 'zero-vector'
    return f"{s} phase {s.phase:+d}"
