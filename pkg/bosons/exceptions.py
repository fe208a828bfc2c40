from rest_framework import status
from rest_framework.exceptions import APIException, ValidationError

from dyadic.exceptions import LiteralParseError  # noqa: F401  re-exported for state grammars


class RuleNotApplicable(ValidationError):
    """A rewrite rule was asked for on a state that does not meet its precondition."""
    default_detail = 'Rewrite rule not applicable.'
    default_code = 'rule_not_applicable'


class InvariantBreach(APIException):
    """A value or oracle cross-check failed; this is a bug, never bad input."""
    status_code = status.HTTP_500_INTERNAL_SERVER_ERROR
    default_detail = 'Internal invariant breach.'
    default_code = 'invariant_breach'
