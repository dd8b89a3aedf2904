"""Custom exception hierarchy for wavecv."""


class WaveCvError(Exception):
    """Base exception for the application."""


class ConfigError(WaveCvError, ValueError):
    """Raised when a name, option or config file value is invalid."""


class SignalLengthError(WaveCvError, ValueError):
    """Raised when a series is too short or not of dyadic length."""


class StructureError(WaveCvError, ValueError):
    """Raised when a wavelet decomposition has inconsistent level lengths."""


class UsageError(WaveCvError, ValueError):
    """Raised when an operation is called with arguments it cannot use."""


class ParseError(WaveCvError, ValueError):
    """Raised when an input data file contains a row that is not a number."""

    def __init__(self, message: str, line_number: int | None = None) -> None:
        super().__init__(f"line {line_number}: {message}" if line_number is not None else message)
        self.line_number = line_number
