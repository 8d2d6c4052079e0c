"""Exception hierarchy shared across the library.

Every failure mode named in an operation contract maps to exactly one of
these classes, so callers (and the CLI's diagnostic mapping) can
distinguish bad configuration from bad data from bad files.
"""


class FrameSurpriseError(Exception):
    """Base class for all library errors."""


class InvalidConfigError(FrameSurpriseError):
    """A parameter or parameter combination is out of its allowed range."""


class UnsupportedOrderError(InvalidConfigError):
    """Expansion order above 12; binomial/factorial exactness would be lost."""


class ShapeError(FrameSurpriseError):
    """Array dimensions do not match the operation's contract."""


class EmptyInputError(FrameSurpriseError):
    """A sequence with zero frames where at least one is required."""


class BudgetError(FrameSurpriseError):
    """Frame budget K exceeds what the strategy can serve (K > T)."""


class TrajectoryFormatError(FrameSurpriseError):
    """Trajectory file does not carry the expected magic bytes."""


class UnsupportedVersionError(TrajectoryFormatError):
    """Trajectory file has a container version this reader does not know."""


class TruncatedFileError(TrajectoryFormatError):
    """Trajectory file size disagrees with its header (short or long)."""


class InvalidDataError(FrameSurpriseError):
    """Payload values are non-finite or otherwise unusable."""
