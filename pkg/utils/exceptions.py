"""
Exception hierarchy shared by every package.

The CLI maps each family to an exit code: usage errors exit 1, data errors
exit 2 and numerical failures exit 3.
"""


class DemandcastError(Exception):
    """Base class for all errors raised by the forecasting pipeline."""

    exit_code = 3


class UsageError(DemandcastError):
    """Invalid command line usage or inconsistent run configuration."""

    exit_code = 1


class ConfigError(UsageError):
    """A configuration file could not be read or holds invalid values."""


class DataError(DemandcastError):
    """Input data is malformed, incomplete or too short for the request."""

    exit_code = 2


class MetricError(DataError):
    """A forecast metric is undefined for the given series."""


class NumericalError(DemandcastError):
    """A numerical routine produced non-finite values or failed to run."""

    exit_code = 3


class ShapeError(NumericalError, ValueError):
    """Operands have incompatible dimensions."""
