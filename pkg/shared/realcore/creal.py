"""
Certified real numbers.

A ``CReal`` is a closed interval [lower, upper] with binary floating-point
endpoints. Every operation rounds outward through mpmath's interval kernel
(``mpmath.libmp.libmpi``), so the true value of the defining expression
always lies inside the interval. Values remember the expression that built
them, which lets callers re-evaluate at a higher precision (``refine``).
"""
from __future__ import annotations

import logging
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from mpmath.libmp import (
    dps_to_prec,
    from_int,
    from_rational,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_le,
    mpf_lt,
    mpf_shift,
    mpf_sign,
    mpf_sub,
    prec_to_dps,
    round_ceiling,
    round_floor,
    to_rational,
    to_str,
)
from mpmath.libmp import libmpi

from shared.utils.config import get_settings
from shared.utils.errors import ConfigurationError, PrecisionError

logger = logging.getLogger(__name__)

Exactish = Union[int, Fraction]
Number = Union[int, Fraction, "CReal"]

HALF = Fraction(1, 2)

_scoped_cap: ContextVar[Optional[int]] = ContextVar("precision_cap", default=None)


class Expr:
    """Node of a symbolic defining expression."""


@dataclass(frozen=True, eq=False)
class Exact(Expr):
    value: Fraction


@dataclass(frozen=True, eq=False)
class Named(Expr):
    name: str
    build: Callable[[int], "CReal"]


@dataclass(frozen=True, eq=False)
class Apply(Expr):
    op: str
    args: tuple[Expr, ...]


@dataclass(frozen=True, eq=False)
class Power(Expr):
    base: Expr
    exponent: int


def _apply_expr(op: str, *operands: "CReal") -> Optional[Expr]:
    exprs = tuple(o.expr for o in operands)
    if any(e is None for e in exprs):
        return None
    return Apply(op, exprs)


def _widen(lo, hi, prec: int):
    """Pad both ends by two units in the last place (transcendental results)."""
    lo_pad = mpf_shift(mpf_abs(lo), 2 - prec)
    hi_pad = mpf_shift(mpf_abs(hi), 2 - prec)
    return (
        mpf_sub(lo, lo_pad, prec, round_floor),
        mpf_add(hi, hi_pad, prec, round_ceiling),
    )


def _to_fraction(value) -> Fraction:
    p, q = to_rational(value)
    return Fraction(int(p), int(q))


class CReal:
    """Immutable certified real: an outward-rounded interval plus its defining expression."""

    __slots__ = ("_lo", "_hi", "_prec", "_expr")

    def __init__(self, lo, hi, prec: int, expr: Optional[Expr] = None):
        if mpf_lt(hi, lo):
            raise ValueError("CReal lower endpoint exceeds upper endpoint")
        self._lo = lo
        self._hi = hi
        self._prec = prec
        self._expr = expr

    @classmethod
    def exact(cls, value: Exactish, prec: int) -> "CReal":
        """Point value (ints are stored exactly, fractions are rounded outward)."""
        value = Fraction(value)
        if value.denominator == 1:
            raw = from_int(value.numerator)
            return cls(raw, raw, prec, Exact(value))
        lo = from_rational(value.numerator, value.denominator, prec, round_floor)
        hi = from_rational(value.numerator, value.denominator, prec, round_ceiling)
        return cls(lo, hi, prec, Exact(value))

    @classmethod
    def from_bounds(
        cls,
        lower: Exactish,
        upper: Exactish,
        prec: int,
        expr: Optional[Expr] = None,
    ) -> "CReal":
        lower, upper = Fraction(lower), Fraction(upper)
        if upper < lower:
            raise ValueError(f"Empty interval [{lower}, {upper}]")
        lo = from_rational(lower.numerator, lower.denominator, prec, round_floor)
        hi = from_rational(upper.numerator, upper.denominator, prec, round_ceiling)
        return cls(lo, hi, prec, expr)

    @classmethod
    def at_dps(cls, value: Exactish, dps: int) -> "CReal":
        return cls.exact(value, dps_to_prec(dps))

    @property
    def prec(self) -> int:
        """Working precision in bits."""
        return self._prec

    @property
    def dps(self) -> int:
        """Working precision in decimal digits."""
        return prec_to_dps(self._prec)

    @property
    def expr(self) -> Optional[Expr]:
        return self._expr

    @property
    def endpoints(self):
        return self._lo, self._hi

    @property
    def lower(self) -> Fraction:
        return _to_fraction(self._lo)

    @property
    def upper(self) -> Fraction:
        return _to_fraction(self._hi)

    @property
    def center(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def radius(self) -> Fraction:
        return (self.upper - self.lower) / 2

    def _coerce(self, other: Number) -> "CReal":
        if isinstance(other, CReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CReal.exact(other, self._prec)
        raise TypeError(f"Cannot combine CReal with {type(other).__name__}")

    def _binary(self, other: Number, op: str, kernel) -> "CReal":
        if not isinstance(other, (CReal, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        prec = max(self._prec, other._prec)
        lo, hi = kernel((self._lo, self._hi), (other._lo, other._hi), prec)
        return CReal(lo, hi, prec, _apply_expr(op, self, other))

    def __add__(self, other: Number) -> "CReal":
        return self._binary(other, "add", libmpi.mpi_add)

    def __radd__(self, other: Number) -> "CReal":
        return self._coerce(other) + self

    def __sub__(self, other: Number) -> "CReal":
        return self._binary(other, "sub", libmpi.mpi_sub)

    def __rsub__(self, other: Number) -> "CReal":
        return self._coerce(other) - self

    def __mul__(self, other: Number) -> "CReal":
        return self._binary(other, "mul", libmpi.mpi_mul)

    def __rmul__(self, other: Number) -> "CReal":
        return self._coerce(other) * self

    def __truediv__(self, other: Number) -> "CReal":
        if not isinstance(other, (CReal, int, Fraction)):
            return NotImplemented
        divisor = self._coerce(other)
        if divisor.sign() is None or divisor.sign() == 0:
            raise PrecisionError("Division by an interval containing 0")
        return self._binary(divisor, "div", libmpi.mpi_div)

    def __rtruediv__(self, other: Number) -> "CReal":
        return self._coerce(other) / self

    def __neg__(self) -> "CReal":
        lo, hi = libmpi.mpi_neg((self._lo, self._hi), self._prec)
        return CReal(lo, hi, self._prec, _apply_expr("neg", self))

    def __abs__(self) -> "CReal":
        lo, hi = libmpi.mpi_abs((self._lo, self._hi), self._prec)
        return CReal(lo, hi, self._prec, _apply_expr("abs", self))

    def __pow__(self, exponent: int) -> "CReal":
        if not isinstance(exponent, int):
            return NotImplemented
        expr = Power(self._expr, exponent) if self._expr is not None else None
        if exponent == 0:
            one = from_int(1)
            return CReal(one, one, self._prec, expr)
        if exponent < 0:
            inverse = CReal.exact(1, self._prec) / (self ** (-exponent))
            return CReal(inverse._lo, inverse._hi, self._prec, expr)
        lo, hi = libmpi.mpi_pow_int((self._lo, self._hi), exponent, self._prec)
        return CReal(lo, hi, self._prec, expr)

    def log(self) -> "CReal":
        if mpf_sign(self._lo) <= 0:
            raise PrecisionError("log of an interval that is not strictly positive")
        lo, hi = libmpi.mpi_log((self._lo, self._hi), self._prec + 10)
        lo, hi = _widen(lo, hi, self._prec)
        return CReal(lo, hi, self._prec, _apply_expr("log", self))

    def sqrt(self) -> "CReal":
        if mpf_sign(self._lo) < 0:
            raise PrecisionError("sqrt of an interval with a negative part")
        lo, hi = libmpi.mpi_sqrt((self._lo, self._hi), self._prec)
        return CReal(lo, hi, self._prec, _apply_expr("sqrt", self))

    def maximum(self, other: Number) -> "CReal":
        """Enclosure of max(self, other)."""
        other = self._coerce(other)
        lo = other._lo if mpf_lt(self._lo, other._lo) else self._lo
        hi = other._hi if mpf_lt(self._hi, other._hi) else self._hi
        return CReal(lo, hi, max(self._prec, other._prec), _apply_expr("max", self, other))

    def sign(self) -> Optional[int]:
        if mpf_sign(self._lo) > 0:
            return 1
        if mpf_sign(self._hi) < 0:
            return -1
        if self._lo == fzero and self._hi == fzero:
            return 0
        return None

    def lt(self, other: Number) -> Optional[bool]:
        other = self._coerce(other)
        if mpf_lt(self._hi, other._lo):
            return True
        if mpf_le(other._hi, self._lo):
            return False
        return None

    def le(self, other: Number) -> Optional[bool]:
        other = self._coerce(other)
        if mpf_le(self._hi, other._lo):
            return True
        if mpf_lt(other._hi, self._lo):
            return False
        return None

    def gt(self, other: Number) -> Optional[bool]:
        return self._coerce(other).lt(self)

    def ge(self, other: Number) -> Optional[bool]:
        return self._coerce(other).le(self)

    def contains(self, value: Number) -> bool:
        if isinstance(value, CReal):
            return self.lower <= value.lower and value.upper <= self.upper
        value = Fraction(value)
        return self.lower <= value <= self.upper

    def overlaps(self, other: "CReal") -> bool:
        return not (mpf_lt(self._hi, other._lo) or mpf_lt(other._hi, self._lo))

    def intersect(self, other: "CReal") -> "CReal":
        if not self.overlaps(other):
            raise PrecisionError("Disjoint enclosures of the same quantity")
        lo = other._lo if mpf_lt(self._lo, other._lo) else self._lo
        hi = other._hi if mpf_lt(other._hi, self._hi) else self._hi
        return CReal(lo, hi, max(self._prec, other._prec), self._expr or other._expr)

    def refine(self, target_radius: Exactish, cap: Optional[int] = None) -> "CReal":
        if self.radius <= target_radius:
            return self
        if self._expr is None:
            raise PrecisionError("Interval has no defining expression to refine")
        refined = refine(self._expr, target_radius, start_dps=2 * self.dps, cap=cap)
        return refined.intersect(self)

    def to_decimal(self, digits: int = 10) -> str:
        mid = libmpi.mpi_mid((self._lo, self._hi), self._prec)
        return to_str(mid, digits)

    def radius_decimal(self, digits: int = 3) -> str:
        delta = libmpi.mpi_delta((self._lo, self._hi), self._prec)
        return to_str(mpf_shift(delta, -1), digits)

    def __repr__(self) -> str:
        return f"CReal({self.to_decimal(20)} ± {self.radius_decimal()})"


_ARITH: dict[str, Callable[..., CReal]] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "neg": lambda a: -a,
    "abs": lambda a: abs(a),
    "log": lambda a: a.log(),
    "sqrt": lambda a: a.sqrt(),
    "max": lambda a, b: a.maximum(b),
}


def arith(op: str, *args: CReal) -> CReal:
    """Apply a named interval operation (add, sub, mul, div, neg, log, abs, sqrt)."""
    try:
        kernel = _ARITH[op]
    except KeyError:
        raise ConfigurationError(f"Unknown arithmetic operation: {op!r}") from None
    return kernel(*args)


def _distance(t: Fraction) -> Fraction:
    frac = t - math.floor(t)
    return min(frac, 1 - frac)


def nearest_int_distance(x: CReal) -> CReal:
    """Certified enclosure of ||x||, the distance from x to the nearest integer."""
    lo, hi = x.lower, x.upper
    if hi - lo >= HALF:
        raise PrecisionError(
            f"Interval of radius {float((hi - lo) / 2):.3g} is too wide for ||x||; refine first"
        )
    contains_integer = math.floor(hi) >= math.ceil(lo)
    contains_half = math.floor(hi - HALF) >= math.ceil(lo - HALF)
    d_lo, d_hi = _distance(lo), _distance(hi)
    lower = Fraction(0) if contains_integer else min(d_lo, d_hi)
    upper = HALF if contains_half else max(d_lo, d_hi)
    return CReal.from_bounds(lower, upper, x.prec, _apply_expr("dist", x))


_EVAL_OPS: dict[str, Callable[..., CReal]] = {**_ARITH, "dist": nearest_int_distance}


def evaluate(expr: Expr, prec: int) -> CReal:
    """Evaluate a defining expression at ``prec`` bits."""
    memo: dict[int, CReal] = {}

    def walk(node: Expr) -> CReal:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Exact):
            value = CReal.exact(node.value, prec)
        elif isinstance(node, Named):
            value = node.build(prec)
        elif isinstance(node, Power):
            value = walk(node.base) ** node.exponent
        elif isinstance(node, Apply):
            value = _EVAL_OPS[node.op](*(walk(a) for a in node.args))
        else:
            raise ConfigurationError(f"Unsupported expression node {type(node).__name__}")
        memo[key] = value
        return value

    return walk(expr)


@contextmanager
def precision_cap(cap: int) -> Iterator[None]:
    """Use ``cap`` digits as the refinement ceiling inside the block (like ``mpmath.workdps``)."""
    token = _scoped_cap.set(cap)
    try:
        yield
    finally:
        _scoped_cap.reset(token)


def current_precision_cap() -> int:
    return _scoped_cap.get() or get_settings().precision_cap


def refine(
    expr: Expr,
    target_radius: Exactish,
    start_dps: Optional[int] = None,
    cap: Optional[int] = None,
) -> CReal:
    """
    Evaluate ``expr`` with radius at most ``target_radius``, doubling the
    working precision until it fits. Raises PrecisionError past the cap.
    """

    settings = get_settings()
    cap = cap or current_precision_cap()
    dps = min(start_dps or settings.default_precision, cap)
    target = Fraction(target_radius)
    best: Optional[CReal] = None
    while True:
        value = evaluate(expr, dps_to_prec(dps))
        best = value if best is None else value.intersect(best)
        if best.radius <= target:
            return best
        if dps >= cap:
            raise PrecisionError(
                f"Precision cap of {cap} digits reached before radius {float(target):.3g}"
            )
        logger.debug(f"Refining expression: {dps} -> {min(2 * dps, cap)} digits")
        dps = min(2 * dps, cap)


def decide(
    value: CReal,
    check: Callable[[CReal], Optional[bool]],
    cap: Optional[int] = None,
) -> bool:
    """
    Settle a three-valued check on ``value``, refining it while the answer is
    unknown. Raises PrecisionError when the cap is reached undecided.
    """
    while True:
        outcome = check(value)
        if outcome is not None:
            return outcome
        if value.radius == 0:
            raise PrecisionError("Check is undecidable on an exact value")
        value = value.refine(value.radius / 2**64, cap=cap)


def settle_sign(value: CReal, cap: Optional[int] = None) -> tuple[int, CReal]:
    """Sign of ``value`` (-1, 0 or 1) and the refined enclosure that decided it."""
    while True:
        sign = value.sign()
        if sign is not None:
            return sign, value
        value = value.refine(value.radius / 2**64, cap=cap)


def working_prec(dps: Optional[int] = None) -> int:
    """Bits of working precision for ``dps`` digits (settings default when None)."""
    return dps_to_prec(dps or get_settings().default_precision)
