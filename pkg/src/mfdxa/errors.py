"""Exception hierarchy and warning categories.

Every error class carries a distinct ``exit_code`` so the CLI can map
failure classes to process exit statuses.
"""


class MfdxaError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InvalidInputError(MfdxaError):
    """Malformed or empty input data."""

    exit_code = 2


class DegenerateSignalError(MfdxaError):
    """Signal has no usable variation (constant series, all-zero fluctuations)."""

    exit_code = 3


class SeriesTooShortError(MfdxaError):
    """Series shorter than the analysis configuration can accommodate."""

    exit_code = 4


class InvalidScaleError(MfdxaError):
    """Window scale incompatible with the series length or detrend order."""

    exit_code = 5


class UnsupportedMomentError(MfdxaError):
    """Moment order q = 0 is outside the supported family."""

    exit_code = 6


class InsufficientScalesError(MfdxaError):
    """Too few scales for a meaningful log-log regression."""

    exit_code = 7


class InsufficientMomentsError(MfdxaError):
    """Too few q values to build a singularity spectrum."""

    exit_code = 8


class UnsupportedFormatError(MfdxaError):
    """Input file is not an uncompressed PCM WAV."""

    exit_code = 9


class AudioTooShortError(MfdxaError):
    """Audio shorter than the requested segmentation."""

    exit_code = 10


class AnalysisFailedError(MfdxaError):
    """Every cell of a match analysis failed."""

    exit_code = 11


class InvalidParameterError(MfdxaError):
    """Generator or configuration parameter outside its domain."""

    exit_code = 12


class SnapFailureWarning(UserWarning):
    """No zero crossing found inside the snap window; nominal boundary kept."""


class ScaleGridWarning(UserWarning):
    """Scale grid degenerate (fewer than two scales); downstream fits will reject."""
