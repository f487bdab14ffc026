"""Exception hierarchy shared by the realcore layer and the solver service."""


class SolverError(Exception):
    """Base class for every failure the solver reports."""


class ConfigurationError(SolverError, ValueError):
    """Unknown constant, malformed config file or invalid option."""


class PairValidationError(ConfigurationError):
    """A recurrence or recurrence pair fails a structural condition."""


class PrecisionError(SolverError, ArithmeticError):
    """An interval is too wide to decide, or an operation is undefined on it."""


class ReductionError(SolverError):
    """The reduction found no admissible convergent."""

    def __init__(self, message: str, label: str | None = None, m: int | None = None):
        super().__init__(message)
        self.label = label
        self.m = m


class BudgetError(SolverError):
    """Reduced bounds exceed the configured search budget."""
