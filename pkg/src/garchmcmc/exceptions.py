"""Exception types shared across the package."""


class GarchMcmcError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(GarchMcmcError):
    """Parameter vector violates the positivity support."""


class PersistenceError(GarchMcmcError):
    """alpha + beta + lambda/2 >= 1: the unconditional variance is undefined."""


class DegenerateCovariance(GarchMcmcError):
    """Accumulated covariance is not positive definite even after jitter."""


class ConstantSeries(GarchMcmcError):
    """A series has zero variance; autocorrelation is undefined."""


class WindowNotFound(GarchMcmcError):
    """No self-consistent truncation window below half the series length."""


class CsvFormatError(GarchMcmcError):
    """A CSV input does not match the expected schema.

    `line` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(GarchMcmcError):
    """A config file or flag override contains an unknown or malformed entry."""
