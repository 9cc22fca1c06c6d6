"""
Errors
======
Exception hierarchy shared by every subpackage.

- InputError: bad counts, malformed rows, mismatched lengths
- ConfigurationError: tuning grids, procedure tags, scenarios
- DegenerateScenarioError: nothing left to analyse after cleaning
"""

from typing import Any, Dict, Optional


class DiscretePi0Error(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def __getattr__(self, name: str) -> Any:
        context = self.__dict__.get("context", {})
        if name in context:
            return context[name]
        raise AttributeError(name)


class InputError(DiscretePi0Error, ValueError):
    """Raised when data handed to the library is invalid."""

    def __init__(self, message: str, line_number: Optional[int] = None, **context: Any):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message, line_number=line_number, **context)


class ConfigurationError(DiscretePi0Error, ValueError):
    """Raised when run parameters are inconsistent."""
    pass


class DegenerateScenarioError(ConfigurationError):
    """Raised when every row was removed before analysis."""
    pass


__all__ = [
    'DiscretePi0Error',
    'InputError',
    'ConfigurationError',
    'DegenerateScenarioError',
]
