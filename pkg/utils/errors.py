"""
Shared error types.

Every concrete error also derives from ValueError so that callers catching
ValueError keep working.
"""

from typing import Optional


class FaeqError(Exception):
    """Base class for all errors raised by this project."""


class DimensionError(FaeqError, ValueError):
    """Array shapes do not match or are invalid."""


class ConfigError(FaeqError, ValueError):
    """A configuration object or file holds invalid values."""


class AlphabetError(FaeqError, ValueError):
    """A value is outside the finite alphabet or its resolution range."""


class SingularSystemError(FaeqError, ValueError):
    """A linear system could not be solved."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition


class CalibrationError(FaeqError, ValueError):
    """Calibration data is missing or malformed."""


class InstanceTooLargeError(FaeqError, ValueError):
    """An exhaustive search would exceed its enumeration limit."""


class IllConditionedWarning(UserWarning):
    """A matrix is close to singular; results may be inaccurate."""
