"""Error hierarchy for shifted Yangian computations.

All errors derive from ``ValueError`` so callers that only guard against bad
input keep working.
"""


class ShiftedYangianError(ValueError):
    """Base class for domain errors raised by this package."""


class ParseError(ShiftedYangianError):
    """Raised when a textual rational function, ℓ-weight or module spec is invalid."""


class NotAMonomialError(ShiftedYangianError):
    """Raised when an ℓ-weight is not a product of generalized simple roots."""


class TruncationInconclusiveError(ShiftedYangianError):
    """Raised when the depth window is too small to decide a decomposition."""


class SamplePointError(ShiftedYangianError):
    """Raised when a spectral sample point hits a pole or a non-cyclic locus."""


class RealizationError(ShiftedYangianError):
    """Raised for invalid module parameters or unsupported module operations."""
