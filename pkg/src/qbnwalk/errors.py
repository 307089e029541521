"""Exception hierarchy shared by all qbnwalk modules."""


class QBNError(Exception):
    """Base class for every error raised by qbnwalk."""


class ModeOutOfRangeError(QBNError, ValueError):
    """A mode index or truncation level falls outside 0..W-1."""


class VertexParseError(QBNError, ValueError):
    pass


class WeightSpecError(QBNError, ValueError):
    pass


class EnumerationLimitError(QBNError, ValueError):
    """Requested level would enumerate more vertices than allowed."""


class DimensionLimitError(QBNError, ValueError):
    pass


class SupportError(QBNError, ValueError):
    """State support is not contained in the truncated vertex set."""


class StateFormatError(QBNError, ValueError):
    pass


class NonUnitStateError(QBNError, ValueError):
    pass


class SectorViolationError(QBNError, ValueError):
    """Initial state is not in the parity sector a check was asked to run on."""


class SpectralCheckError(QBNError):
    """An analytic eigenpair failed its residual check."""
