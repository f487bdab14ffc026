"""
Reduction of huge exponent bounds with continued fractions.

If q > 6M is a convergent denominator of tau and
eps = ||mu q|| - M ||tau q|| > 0, then 0 < m*tau - n + mu < A * B^(-k)
has no solution with 1 <= m <= M and k >= log(A q / eps) / log B.
"""
import logging
import math
from fractions import Fraction
from typing import Optional

from shared.models import (
    ConvergentTable,
    FamilyOutcome,
    LinearFormStage,
    ReductionInstance,
    ReductionOutcome,
    Sign,
)
from shared.realcore import CReal, nearest_int_distance, settle_sign
from shared.utils.config import get_settings
from shared.utils.errors import ConfigurationError, PrecisionError, ReductionError

from .linforms import eta1_value

logger = logging.getLogger(__name__)


def common_prefix(lower: Fraction, upper: Fraction) -> list[int]:
    """Partial quotients shared by every real in [lower, upper]."""
    quotients: list[int] = []
    while True:
        a = math.floor(lower)
        if math.floor(upper) != a:
            return quotients
        quotients.append(a)
        lower, upper = lower - a, upper - a
        if lower == 0:
            return quotients
        lower, upper = 1 / upper, 1 / lower


def convergents(quotients: list[int]) -> list[tuple[int, int]]:
    """p_i / q_i for every prefix [a_0; a_1, ..., a_i]."""
    result = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        result.append((p, q))
    return result


def expand(
    x: CReal, min_q: int, extra: Optional[int] = None, min_length: int = 0
) -> ConvergentTable:
    """
    Certified expansion of x until some q_i > min_q, plus ``extra`` more
    convergents and at least ``min_length`` in total. Refines x while the
    interval endpoints disagree too early.
    """
    if extra is None:
        extra = get_settings().extra_convergents
    value = x
    while True:
        quotients = common_prefix(value.lower, value.upper)
        table = convergents(quotients)
        index = next((i for i, (_, q) in enumerate(table) if q > min_q), None)
        wanted = max(index + extra + 1, min_length) if index is not None else 0
        if index is not None and (wanted <= len(table) or value.radius == 0):
            keep = min(len(table), wanted)
            logger.debug(f"Expanded to {keep} convergents at {value.dps} digits")
            return ConvergentTable(
                x=value, quotients=quotients[:keep], convergents=table[:keep]
            )
        if value.radius == 0:
            raise ReductionError(
                f"Expansion ended after {len(quotients)} quotients: the value is rational"
            )
        target = min(value.radius**2, value.radius / 2**64)
        logger.debug(
            f"Only {len(quotients)} certified quotients at {value.dps} digits; refining"
        )
        value = value.refine(target)


def dp_epsilon(q: int, tau: CReal, mu: CReal, M: int) -> CReal:
    """Certified ||mu q|| - M ||tau q||."""
    if q <= 0:
        raise ConfigurationError(f"q must be positive, got {q}")
    tau = tau.refine(Fraction(1, 2**64 * q * max(M, 1)))
    mu = mu.refine(Fraction(1, 2**64 * q))
    return nearest_int_distance(mu * q) - M * nearest_int_distance(tau * q)


def exponent_bound(A: CReal, B: CReal, q: int, epsilon: CReal) -> int:
    """Largest exponent not excluded: ceil(log(A q / eps) / log B) - 1, rounded up."""
    if epsilon.sign() != 1:
        raise PrecisionError("epsilon must be certified positive")
    if B.gt(1) is not True:
        raise ConfigurationError("B must be certified greater than 1")
    limit = (A * q / epsilon).log() / B.log()
    return max(0, math.ceil(limit.upper) - 1)


def dp_reduce(
    inst: ReductionInstance,
    table: ConvergentTable,
    start_index: Optional[int] = None,
) -> ReductionOutcome:
    """
    Apply the reduction at the first convergent (from ``start_index``) with
    q > 6M and certified eps > 0.
    """
    if start_index is None:
        start_index = get_settings().convergent_start_index
    first = table.first_index_above(6 * inst.M, start_index)
    if first is None:
        raise ReductionError(
            f"{inst.label}: no convergent with q > 6M among {len(table)} computed",
            label=inst.label,
            m=inst.m,
        )

    for index in range(first, len(table)):
        q = table.q(index)
        try:
            sign, epsilon = settle_sign(dp_epsilon(q, inst.tau, inst.mu, inst.M))
        except PrecisionError as e:
            logger.warning(f"{inst.label}: epsilon undecided at convergent {index}: {e}")
            continue
        if sign == 1:
            bound = exponent_bound(inst.A, inst.B, q, epsilon)
            return ReductionOutcome(
                label=inst.label,
                sign=inst.sign,
                m=inst.m,
                convergent_index=index,
                q=q,
                epsilon=epsilon,
                exponent_bound=bound,
                q_exceeds_6M=q > 6 * inst.M,
                epsilon_positive=True,
            )
        logger.warning(
            f"{inst.label}: epsilon {epsilon.to_decimal(6)} is not positive at "
            f"convergent {index}, advancing"
        )

    raise ReductionError(
        f"{inst.label}: no convergent in [{first}, {len(table) - 1}] gives a positive epsilon",
        label=inst.label,
        m=inst.m,
    )


def reduce_family(
    base: ReductionInstance,
    mu_values: list[tuple[int, CReal]],
    table: ConvergentTable,
    start_index: Optional[int] = None,
) -> FamilyOutcome:
    """Reduce every mu_m of a family; report the smallest eps and largest bound."""
    if not mu_values:
        raise ConfigurationError(f"{base.label}: empty family")
    members = []
    for m, mu in mu_values:
        member = base.model_copy(update={"mu": mu, "m": m, "label": f"{base.label}[m={m}]"})
        try:
            members.append(dp_reduce(member, table, start_index))
        except ReductionError as e:
            raise ReductionError(
                f"{base.label}: family member m={m} has no certified positive epsilon",
                label=base.label,
                m=m,
            ) from e

    weakest = min(members, key=lambda outcome: outcome.epsilon.lower)
    max_bound = max(outcome.exponent_bound for outcome in members)
    logger.info(
        f"{base.label}: {len(members)} members, min epsilon {weakest.epsilon.to_decimal(6)} "
        f"(m={weakest.m}), bound {max_bound}"
    )
    return FamilyOutcome(
        label=base.label,
        sign=base.sign,
        min_epsilon=weakest.epsilon,
        max_bound=max_bound,
        members=members,
    )


def lemma_A(stage: LinearFormStage) -> int:
    """ceil(2 * rhs_coeff / log D), from |x| < 2|e^x - 1| when |e^x - 1| < 1/4."""
    return math.ceil((2 * stage.rhs_coeff / stage.log_base).upper)


def min_decay_exponent(stage: LinearFormStage) -> int:
    """Least e >= 1 with rhs_coeff * decay_base^(-e) < 1/4."""
    ratio = (4 * stage.rhs_coeff).log() / stage.decay_base.log()
    return max(1, math.floor(ratio.upper) + 1)


def gamma_to_lemma_form(
    stage: LinearFormStage,
    sign: Sign,
    M: int,
    m: Optional[int] = None,
) -> ReductionInstance:
    """
    Divide Gamma = log(Lambda + 1) by log D and orient it as
    0 < x*tau - y + mu < A * B^(-e). The negative sign mirrors the
    inequality, replacing mu by -mu (||-mu q|| = ||mu q||).
    """
    mu = stage.orientation * stage.eta1_exponent * eta1_value(stage, m).log() / stage.log_base
    if sign == Sign.NEGATIVE:
        mu = -mu
    prec = stage.tau.prec
    label = stage.which.value.replace("lambda", "gamma") + f"/{sign.value}"
    return ReductionInstance(
        label=label,
        tau=stage.tau,
        mu=mu,
        A=CReal.exact(lemma_A(stage), prec),
        B=stage.decay_base,
        M=M,
        sign=sign,
        m=m if not stage.which.is_first else None,
    )


def family_mu_values(
    stage: LinearFormStage, sign: Sign, M: int, m_values: list[int]
) -> list[tuple[int, CReal]]:
    return [(m, gamma_to_lemma_form(stage, sign, M, m).mu) for m in m_values]
