"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: InputError -> 2, UndeterminedError -> 3,
ConsistencyError -> 4, NotRationalError -> 5.
"""


class AgeAlgError(Exception):
    """Base class for all library errors."""


class InputError(AgeAlgError):
    """Malformed or out-of-contract input (bad subset, signature mismatch,
    capacity violation, degree mismatch, unrealized type, ...)."""


class UndeterminedError(AgeAlgError):
    """A bounded search (fatness level, generator discovery) did not
    stabilize within its cap; carries diagnostics in args."""


class ConsistencyError(AgeAlgError):
    """An internal cross-check failed: two independent computations of the
    same quantity disagree.  Always indicates a bug, never bad input."""


class NotRationalError(AgeAlgError):
    """A series did not fit the requested rational form within the guard
    window; the caller may retry with a larger dimension or degree."""
