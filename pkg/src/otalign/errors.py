"""Exception taxonomy.

Two CLI-visible families: ``FormatError`` (malformed inputs, shape/dtype
problems; exit code 2) and ``NumericalError`` (solver breakdown; exit code 3).
"""


class OTAlignError(Exception):
    """Base class for all package errors."""


class FormatError(OTAlignError):
    """Malformed or inconsistent input data. CLI exit code 2."""


class NumericalError(OTAlignError):
    """Numerical failure that invalidates a result. CLI exit code 3."""


class ZeroVector(FormatError):
    """A vector with zero (or underflowing) L2 norm where a direction is required."""


class DimensionMismatch(FormatError):
    """Embedding dimensions that were required to agree do not."""


class ShapeMismatch(FormatError):
    """Array or tensor-file shapes that were required to agree do not."""


class NumericalBlowup(NumericalError):
    """A Sinkhorn scaling factor became non-finite even in the log domain."""


class TooLarge(FormatError):
    """Instance exceeds the exact solver's small-instance bound."""


class DegenerateImage(FormatError):
    """Image too small for the requested crop scale."""


class CorruptManifest(FormatError):
    """Bundle manifest is unreadable or structurally invalid."""


class UnsupportedDtype(FormatError):
    """Bundle declares a tensor dtype other than little-endian f32."""


class MissingTensorFile(FormatError):
    """Manifest references a tensor file that does not exist."""


class IdMismatch(FormatError):
    """Labels reference item or class ids absent from the bundles."""


class EmptyClassList(FormatError):
    """Prediction requested with no candidate classes."""
