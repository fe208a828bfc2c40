from rest_framework.exceptions import ValidationError


class NormalizationError(ValidationError):
    """An input superposition is not normalized within tolerance."""
    default_detail = 'Superposition is not normalized.'
    default_code = 'not_normalized'


class AmplitudeError(ValidationError):
    """An amplitude or probability is NaN, infinite, or out of range."""
    default_detail = 'Invalid amplitude.'
    default_code = 'invalid_amplitude'
