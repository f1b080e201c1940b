"""Shared exception types."""


class PrecisionError(ValueError):
    """A requested value is not representable on the available dyadic grid."""


class AdmissibilityError(ValueError):
    """A requested average exceeds what the Carleson constraint allows."""


class ResourceLimitError(RuntimeError):
    """A computation exceeded its configured state/cell budget."""
