"""Exception types shared across the package.

Only failures the CLI must tell apart get their own class; everything else
raises plain ValueError with a descriptive message.
"""


class DimensionError(ValueError):
    """Shapes or index ranges do not fit the requested operation."""


class NotUnitaryError(ValueError):
    """A matrix required to be unitary fails the unitarity check."""


class PrescriptionError(ValueError):
    """A determinant prescription violates its modulus or product constraint."""
