"""Exception hierarchy shared by all corrseg modules.

Every domain error derives from :class:`CorrsegError` so callers (and the
command line front end) can separate contract violations from genuine bugs.
"""


class CorrsegError(Exception):
    """Base class for all corrseg domain errors."""


class NotSquareError(CorrsegError):
    """Matrix input is not square (or is empty)."""


class ValueRangeError(CorrsegError):
    """A value lies outside the closed interval [0, 1]."""


class AsymmetricError(CorrsegError):
    """Matrix input is not symmetric within tolerance."""


class InvalidThroughputError(CorrsegError):
    """Window size is not an even integer >= 2."""


class LayoutMismatchError(CorrsegError):
    """Input dimensions disagree with the computed window layout."""


class ParamConstraintError(CorrsegError):
    """Scaling or tuning parameters violate their feasibility constraints."""


class ShapeMismatchError(CorrsegError):
    """Array shape differs from what the operation requires."""


class EmptyTrainingSetError(CorrsegError):
    """Training requested on a set with no records."""


class SingularSystemError(CorrsegError):
    """Normal equations are singular (possible only without regularization)."""


class LengthMismatchError(CorrsegError):
    """Two sequences that must align have different lengths."""


class ZeroVarianceError(CorrsegError):
    """Coefficient of determination is undefined for constant targets."""


class DegenerateWindowError(CorrsegError):
    """Probe width k does not satisfy 1 <= k < N."""


class EmptyGridError(CorrsegError):
    """Transferability requested on an empty metric grid."""


class MissingModelError(CorrsegError):
    """Model bank has no entry for the requested throughput."""


class NoCandidatesError(CorrsegError):
    """Selection requested but no candidates were supplied."""


class FileFormatError(CorrsegError):
    """A matrix, dataset, or report file does not parse as expected."""


class ModelFormatError(FileFormatError):
    """A model file is malformed or has an unsupported format version."""
