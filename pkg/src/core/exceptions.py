"""
Error Types

Domain errors raised across the toolkit. Everything derives from
ValueError so callers that only guard against bad input keep working.
"""


class SturmianError(ValueError):
    """Base class for all toolkit errors."""


class ConfigError(SturmianError):
    """Invalid configuration, entry list or parameter."""


class InsufficientDepthError(SturmianError):
    """The continued fraction has too few entries for the request."""


class EnclosureExhaustedError(InsufficientDepthError):
    """The deepest theta enclosure could not resolve a ceiling."""


class BudgetExceededError(SturmianError):
    """A word, power or horizon budget would be exceeded."""


class IncompleteLanguageError(SturmianError):
    """A language slice is not certified complete, or has the wrong size."""


class DataIntegrityError(SturmianError):
    """Two independent computations disagree, or a structural law failed."""


class UnresolvedDistanceError(SturmianError):
    """Two words agree on the whole materialized range."""


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def exit_code_for(error_name: str) -> int:
    """Process exit status for a failure identified by its error class name."""
    if error_name == ConfigError.__name__:
        return EXIT_USAGE
    if error_name == BudgetExceededError.__name__:
        return EXIT_BUDGET
    return EXIT_FAILURE
