"""Exceptions for the Sinai walk lab."""

class SinaiLabError(Exception):
    """Exception to indicate a general error."""


class InvalidLaw(
    SinaiLabError
):
    """Exception to indicate an inadmissible environment law."""


class ExtensionBudgetExceeded(
    SinaiLabError
):
    """Exception to indicate that a window would grow past its site cap."""


class RangeError(
    SinaiLabError
):
    """Exception to indicate sites outside a window or in the wrong order."""


class RejectionBudgetExceeded(
    SinaiLabError
):
    """Exception to indicate that rejection sampling ran out of attempts."""


class ConfigError(
    SinaiLabError
):
    """Exception to indicate an invalid run configuration."""


class ResultIoError(
    SinaiLabError
):
    """Exception to indicate a result file that cannot be read or written."""
