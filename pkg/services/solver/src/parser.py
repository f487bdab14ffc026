"""
Parse recurrence-pair configuration into a validated RecurrencePair.

Accepted shapes (JSON):
  {"equation": "fpp"}                          built-in pair
  {"equation": "custom", "label": "...",
   "U": {"name": "...", "a": 1, "b": 1},
   "V": {"name": "...", "a": 2, "b": 1}}       custom pair
  a certificate, whose config.pair is read
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from shared.models import BinaryRecurrence, Equation, RecurrencePair
from shared.utils.errors import ConfigurationError

from .sequences import builtin_pair, make_pair

logger = logging.getLogger(__name__)


def _parse_equation(raw: Any) -> Equation:
    try:
        return Equation(str(raw or "custom").lower())
    except ValueError:
        choices = ", ".join(e.value for e in Equation)
        raise ConfigurationError(f"Unknown equation {raw!r}; expected one of {choices}") from None


def _parse_recurrence(raw: Any, role: str) -> BinaryRecurrence:
    if not isinstance(raw, dict):
        raise ConfigurationError(f"Pair config is missing the {role} recurrence")
    data = {"name": role, **raw}
    try:
        return BinaryRecurrence.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid {role} recurrence: {e}") from e


def parse_pair_config(data: Dict[str, Any], dps: Optional[int] = None) -> RecurrencePair:
    """
    Build a validated pair from a config tree.

    Args:
        data: Parsed JSON tree (pair config or certificate)
        dps: Working precision for the validation checks

    Returns:
        RecurrencePair that passed every structural check
    """
    if not isinstance(data, dict):
        raise ConfigurationError("Pair config must be a JSON object")
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"].get("pair") or {}

    equation = _parse_equation(data.get("equation"))
    if "U" not in data and "V" not in data:
        if equation == Equation.CUSTOM:
            raise ConfigurationError("A custom pair needs both U and V recurrences")
        return builtin_pair(equation)

    U = _parse_recurrence(data.get("U"), "U")
    V = _parse_recurrence(data.get("V"), "V")
    pair = make_pair(U, V, equation=equation, label=data.get("label") or "", dps=dps)
    logger.info(f"Loaded pair {pair.label} ({equation.value})")
    return pair


def load_pair_config(path: Path, dps: Optional[int] = None) -> RecurrencePair:
    """Read and validate a pair config file."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigurationError(f"Cannot read pair config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Pair config {path} is not valid JSON: {e}") from e
    return parse_pair_config(data, dps=dps)
