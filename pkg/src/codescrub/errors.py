"""Exception types shared across the toolkit."""


class CodeScrubError(Exception):
    """Base class for all toolkit errors."""


class ParseFailure(CodeScrubError):
    """Source text rejected by the language grammar."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class PreconditionError(CodeScrubError):
    """An operator was invoked on input that does not meet its preconditions."""


class UnsupportedOperator(CodeScrubError):
    """Operator requested for a language that does not implement it."""


class LengthError(CodeScrubError):
    """Gram length does not match the sketch gram width."""


class ParamMismatch(CodeScrubError):
    """Sketches built with different parameters cannot be merged."""


class VersionMismatch(CodeScrubError):
    """Sketch file has an unknown magic/version or fails its checksum."""


class EmptyTrace(CodeScrubError):
    """Log-probability trace contains no scored tokens."""


class PairMismatch(CodeScrubError):
    """Trace pair does not share model_id and unit_id."""


class PopulationTooSmall(CodeScrubError):
    """Requested sample size exceeds the filtered population."""


class ConfigError(CodeScrubError):
    """Invalid run configuration."""
