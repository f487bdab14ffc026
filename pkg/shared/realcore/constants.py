"""Named real constants of the Fibonacci/Pell setting."""
import logging
from typing import Callable

from mpmath.libmp import dps_to_prec

from shared.realcore.creal import CReal, Named
from shared.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

MIN_PRECISION = 32

# extra bits carried while building a constant
GUARD_BITS = 24


def _sqrt(n: int) -> Callable[[int], CReal]:
    return lambda prec: CReal.exact(n, prec).sqrt()


def _alpha(prec: int) -> CReal:
    return (1 + _sqrt(5)(prec)) / 2


def _beta(prec: int) -> CReal:
    return (1 - _sqrt(5)(prec)) / 2


def _gamma(prec: int) -> CReal:
    return 1 + _sqrt(2)(prec)


def _delta(prec: int) -> CReal:
    return 1 - _sqrt(2)(prec)


def _log_alpha(prec: int) -> CReal:
    return _alpha(prec).log()


def _log_gamma(prec: int) -> CReal:
    return _gamma(prec).log()


_BUILDERS: dict[str, Callable[[int], CReal]] = {
    "alpha": _alpha,
    "beta": _beta,
    "gamma": _gamma,
    "delta": _delta,
    "sqrt2": _sqrt(2),
    "sqrt5": _sqrt(5),
    "log_alpha": _log_alpha,
    "log_gamma": _log_gamma,
    "c1": lambda prec: _log_gamma(prec) / _log_alpha(prec),
    "c2": lambda prec: _log_alpha(prec) / _log_gamma(prec),
}

CONSTANT_IDS = tuple(_BUILDERS)


def _guarded(name: str) -> Callable[[int], CReal]:
    build = _BUILDERS[name]

    def run(prec: int) -> CReal:
        value = build(prec + GUARD_BITS)
        lo, hi = value.endpoints
        return CReal(lo, hi, prec, _NODES[name])

    return run


_NODES: dict[str, Named] = {name: Named(name, _guarded(name)) for name in _BUILDERS}


def constant_node(name: str) -> Named:
    """Expression node for a named constant (shared so evaluation can memoize it)."""
    try:
        return _NODES[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown constant {name!r}; expected one of {', '.join(CONSTANT_IDS)}"
        ) from None


def make_constant(name: str, precision: int) -> CReal:
    """
    Certified enclosure of a named constant at ``precision`` decimal digits.

    The radius is at most 10^(2 - precision).
    """
    node = constant_node(name)
    if precision < MIN_PRECISION:
        raise ConfigurationError(
            f"Precision must be at least {MIN_PRECISION} digits, got {precision}"
        )
    value = node.build(dps_to_prec(precision))
    logger.debug(f"Constant {name} at {precision} digits: {value!r}")
    return value
