"""Exceptions for the Sinai walk lab."""

from .lab_exceptions import (
    SinaiLabError,
    InvalidLaw,
    ExtensionBudgetExceeded,
    RangeError,
    RejectionBudgetExceeded,
    ConfigError,
    ResultIoError,
)

def __init__():
    """Initialize the lab exceptions."""
    pass
