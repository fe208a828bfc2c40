from rest_framework.exceptions import ValidationError


class NonStandardInput(ValidationError):
    """A standard state was required (qubit-binary output, arithmetic operands)."""
    default_detail = 'Input is not a standard state.'
    default_code = 'nonstandard_input'
