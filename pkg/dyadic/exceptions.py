from rest_framework.exceptions import ValidationError


class ExponentOverflow(ValidationError):
    """A site index or exponent left the supported integer range."""
    default_detail = 'Exponent out of range.'
    default_code = 'exponent_overflow'


class LiteralParseError(ValidationError):
    """A literal did not match its grammar.

    ``position`` is the 0-based column of the failure, ``line`` the 1-based
    input line when the literal came from a batch file.
    """
    default_detail = 'Malformed literal.'
    default_code = 'parse_error'

    def __init__(self, message, position=None, line=None):
        self.message = message
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        detail = f"{message} ({', '.join(where)})" if where else message
        super().__init__(detail)


class FloatOverflow(ValidationError):
    """An exact value is too large to approximate as a float."""
    default_detail = 'Value too large for a floating-point expectation.'
    default_code = 'float_overflow'
