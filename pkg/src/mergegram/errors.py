"""Exception hierarchy shared by the library and the command line."""


class MergegramError(Exception):
    """Base class for every error raised by this package."""


class ParseError(MergegramError, ValueError):
    """Malformed cloud, diagram or config file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidMetric(MergegramError, ValueError):
    pass


class DimensionMismatch(MergegramError, ValueError):
    pass


class CloudTooSmall(MergegramError, ValueError):
    pass


class NegativeMultiplicity(MergegramError, ValueError):
    """More births than deaths at some scale: the mergegram is corrupted."""


class ReconstructionError(MergegramError, ValueError):
    pass


class NotGeneralPosition(ReconstructionError):
    def __init__(self, message, scale=None):
        self.scale = scale
        super().__init__(message)


class DanglingBirth(ReconstructionError):
    pass


class LeafDeficit(ReconstructionError):
    pass


class DegenerateBoundingBox(MergegramError, ValueError):
    pass


class DegenerateQuad(MergegramError, ValueError):
    pass


class SingularSystem(MergegramError, ValueError):
    pass


class ConfigError(MergegramError, ValueError):
    pass
