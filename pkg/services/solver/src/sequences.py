"""
Binary recurrences: exact terms, Binet data, growth inequalities and the
index estimates that follow from them.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from sympy import factorint

from shared.models import BinaryRecurrence, Equation, RecurrencePair
from shared.realcore import CReal, decide, working_prec
from shared.utils.errors import PairValidationError

logger = logging.getLogger(__name__)

FIBONACCI = BinaryRecurrence(name="Fibonacci", a=1, b=1)
PELL = BinaryRecurrence(name="Pell", a=2, b=1)

# term tables, keyed by BinaryRecurrence.key
_TERMS: dict[tuple[int, int, int, int], list[int]] = {}


def builtin_pair(equation: Equation) -> RecurrencePair:
    """The two pairs of the theorem: F_k = P_m P_n and P_k = F_m F_n."""
    if equation == Equation.FPP:
        return RecurrencePair(equation=equation, U=FIBONACCI, V=PELL, label="F_k = P_m P_n")
    if equation == Equation.FFP:
        return RecurrencePair(equation=equation, U=PELL, V=FIBONACCI, label="P_k = F_m F_n")
    raise PairValidationError(f"No built-in pair for equation {equation.value!r}")


def term(rec: BinaryRecurrence, n: int) -> int:
    """Exact u_n, extending the memoized table as needed."""
    if n < 0:
        raise ValueError(f"Index must be non-negative, got {n}")
    table = _TERMS.setdefault(rec.key, [rec.u0, rec.u1])
    while len(table) <= n:
        table.append(rec.a * table[-1] + rec.b * table[-2])
    return table[n]


def terms(rec: BinaryRecurrence, n_max: int) -> list[int]:
    """[u_0, ..., u_{n_max}]."""
    term(rec, n_max)
    return _TERMS[rec.key][: n_max + 1]


@lru_cache(maxsize=64)
def _sqrt_discriminant(discriminant: int, prec: int) -> CReal:
    return CReal.exact(discriminant, prec).sqrt()


def root_dom(rec: BinaryRecurrence, dps: Optional[int] = None) -> CReal:
    """Dominant root (a + sqrt(a^2 + 4b)) / 2."""
    prec = working_prec(dps)
    return (rec.a + _sqrt_discriminant(rec.discriminant, prec)) / 2


def root_sub(rec: BinaryRecurrence, dps: Optional[int] = None) -> CReal:
    prec = working_prec(dps)
    return (rec.a - _sqrt_discriminant(rec.discriminant, prec)) / 2


def binet_scale(rec: BinaryRecurrence, dps: Optional[int] = None) -> CReal:
    """1 / (root_dom - root_sub) = 1 / sqrt(discriminant)."""
    prec = working_prec(dps)
    return 1 / _sqrt_discriminant(rec.discriminant, prec)


def binet_value(rec: BinaryRecurrence, n: int, dps: Optional[int] = None) -> CReal:
    """Certified value of the Binet closed form at n."""
    alpha, beta = root_dom(rec, dps), root_sub(rec, dps)
    lead = rec.u1 - rec.u0 * beta
    tail = rec.u1 - rec.u0 * alpha
    return binet_scale(rec, dps) * (lead * alpha**n - tail * beta**n)


def squarefree_part(value: int) -> int:
    """Squarefree kernel of a positive integer."""
    part = 1
    for prime, exponent in factorint(value).items():
        if exponent % 2:
            part *= prime
    return part


def validate_recurrence(rec: BinaryRecurrence, dps: Optional[int] = None) -> None:
    """
    Reject recurrences the bound machinery cannot certify.

    Requires a >= 1, b = +1 or -1, a positive non-square discriminant and
    |root_dom| > 1 > |root_sub|.
    """
    if rec.a < 1:
        raise PairValidationError(f"{rec.name}: coefficient a must be positive, got {rec.a}")
    if rec.b not in (1, -1):
        raise PairValidationError(
            f"{rec.name}: the product of the roots must be +1 or -1 (b = {rec.b})"
        )
    disc = rec.discriminant
    if disc <= 0:
        raise PairValidationError(f"{rec.name}: discriminant {disc} gives non-real roots")
    if math.isqrt(disc) ** 2 == disc:
        raise PairValidationError(f"{rec.name}: discriminant {disc} is a perfect square")

    dom, sub = root_dom(rec, dps), root_sub(rec, dps)
    if not decide(dom, lambda x: x.gt(1)) or not decide(abs(sub), lambda x: x.lt(1)):
        raise PairValidationError(f"{rec.name}: roots are not separated by 1 in absolute value")


def make_pair(
    U: BinaryRecurrence,
    V: BinaryRecurrence,
    equation: Equation = Equation.CUSTOM,
    label: str = "",
    dps: Optional[int] = None,
) -> RecurrencePair:
    """Build a validated pair for U_k = V_m * V_n."""
    for rec in (U, V):
        validate_recurrence(rec, dps)
        if (rec.u0, rec.u1) != (0, 1):
            raise PairValidationError(
                f"{rec.name}: only Lucas sequences (u0, u1) = (0, 1) are supported, "
                f"got ({rec.u0}, {rec.u1})"
            )
    if squarefree_part(U.discriminant) == squarefree_part(V.discriminant):
        raise PairValidationError(
            f"{U.name} and {V.name} generate the same quadratic field "
            f"Q(sqrt({squarefree_part(U.discriminant)}))"
        )
    return RecurrencePair(
        equation=equation,
        U=U,
        V=V,
        label=label or f"{U.name}_k = {V.name}_m {V.name}_n",
    )


def c1(pair: RecurrencePair, dps: Optional[int] = None) -> CReal:
    """log(root_dom(V)) / log(root_dom(U))."""
    return root_dom(pair.V, dps).log() / root_dom(pair.U, dps).log()


def c2(pair: RecurrencePair, dps: Optional[int] = None) -> CReal:
    return root_dom(pair.U, dps).log() / root_dom(pair.V, dps).log()


def d_multiple(pair: RecurrencePair, dps: Optional[int] = None) -> int:
    """s = max(ceil(2 * c1), 3): every exponent of the linear forms is at most s*n."""
    return max(math.ceil(c1(pair, dps).upper * 2), 3)


def check_growth_bounds(
    rec: BinaryRecurrence, n_max: int, dps: Optional[int] = None
) -> list[int]:
    """
    Indices 1 <= n <= n_max where root_dom^(n-2) <= u_n <= root_dom^(n-1) fails.

    The inequalities do not hold at n = 0 (u_0 = 0), so the range starts at 1.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    dom = root_dom(rec, dps)
    violations = []
    for n in range(1, n_max + 1):
        u = term(rec, n)
        below = decide(dom ** (n - 2), lambda x, u=u: x.le(u))
        above = decide(dom ** (n - 1), lambda x, u=u: x.ge(u))
        if not (below and above):
            violations.append(n)
    if violations:
        logger.warning(
            f"{rec.name}: growth inequalities fail at {len(violations)} indices",
            extra={"first_violations": violations[:5]},
        )
    return violations


def k_range(
    pair: RecurrencePair, m: int, n: int, dps: Optional[int] = None
) -> tuple[int, int]:
    """
    Integer bracket for k in U_k = V_m V_n:
    1 + c1*(m + n - 4) <= k <= 2 + c1*(m + n - 2).
    """
    if not 1 <= m <= n:
        raise ValueError(f"Need 1 <= m <= n, got m={m}, n={n}")
    c = c1(pair, dps)
    k_lo = max(1, math.ceil((1 + c * (m + n - 4)).lower))
    k_hi = math.floor((2 + c * (m + n - 2)).upper)
    return k_lo, k_hi


def check_coarse_k_bound(pair: RecurrencePair, n_max: int, dps: Optional[int] = None) -> int:
    """
    Certify k <= s*n for every 1 <= n <= n_max (k < 4n for F_k = P_m P_n,
    k <= 3n for P_k = F_m F_n). Returns s.
    """
    s = d_multiple(pair, dps)
    for n in range(1, n_max + 1):
        _, k_hi = k_range(pair, n, n, dps)
        if k_hi > s * n:
            raise PairValidationError(f"k bracket {k_hi} exceeds {s}n at n={n}")
    return s


def quadratic_surd_height(square: Fraction, dps: Optional[int] = None) -> CReal:
    """
    Logarithmic height of sqrt(square) for a positive rational ``square``.

    For p/q in lowest terms and not a rational square the minimal polynomial
    is q*X^2 - p, so h = log(max(p, q)) / 2; otherwise sqrt is rational r/s
    and h = log(max(r, s)).
    """
    prec = working_prec(dps)
    p, q = square.numerator, square.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return CReal.exact(max(rp, rq), prec).log()
    return CReal.exact(max(p, q), prec).log() / 2


def eta1_square(pair: RecurrencePair, m: int) -> Fraction:
    """eta_1^2 of the second form: disc(U) * V_m^2 / disc(V)."""
    return Fraction(pair.U.discriminant * term(pair.V, m) ** 2, pair.V.discriminant)


def eta1_height_bound(pair: RecurrencePair, m: int, dps: Optional[int] = None) -> CReal:
    """
    Upper bound for h(eta_1) of the second form, eta_1 = sqrt(disc U) V_m / sqrt(disc V).

    Returns the larger of the chain estimate log V_m + log(disc U)/2 and the
    exact height, which is what dominates when eta_1 < 1.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    prec = working_prec(dps)
    chain = CReal.exact(term(pair.V, m), prec).log() + CReal.exact(
        pair.U.discriminant, prec
    ).log() / 2
    exact = quadratic_surd_height(eta1_square(pair, m), dps)
    return chain.maximum(exact)
