from .config import Settings, get_settings
from .errors import (
    BudgetError,
    ConfigurationError,
    PairValidationError,
    PrecisionError,
    ReductionError,
    SolverError,
)

__all__ = [
    "Settings",
    "get_settings",
    "SolverError",
    "ConfigurationError",
    "PairValidationError",
    "PrecisionError",
    "ReductionError",
    "BudgetError",
]
