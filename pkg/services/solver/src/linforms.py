"""
Lower bounds for linear forms in three logarithms and the absolute index
bounds they imply.

For U_k = V_m V_n with dominant roots alpha (of U) and gamma (of V) and
discriminants dU, dV, the first form is

    |(dV / sqrt(dU)) * alpha^k * gamma^-(m+n) - 1| < 2 max(dV / sqrt(dU), 3) / gamma^(2m)

and the second form, with eta_1 = sqrt(dU) V_m / sqrt(dV),

    |eta_1^-1 * alpha^k * gamma^-n - 1| < R2 / gamma^(2n).
"""
import logging
import math
from fractions import Fraction
from typing import Optional

from shared.models import (
    AbsoluteBound,
    AlgebraicParam,
    BinaryRecurrence,
    Equation,
    FormKind,
    LinearFormStage,
    ParamTerm,
    RecurrencePair,
    StageBound,
)
from shared.realcore import CReal, decide, working_prec
from shared.utils.errors import ConfigurationError, SolverError

from . import sequences

logger = logging.getLogger(__name__)

MATVEEV_FACTOR = Fraction(7, 5)
MIN_A = Fraction(4, 25)
FIXED_POINT_ITERATIONS = 500


def form_kinds(pair: RecurrencePair) -> tuple[FormKind, FormKind]:
    """(first, second) form labels used for a pair."""
    if pair.equation == Equation.FFP:
        return FormKind.LAMBDA3, FormKind.LAMBDA4
    return FormKind.LAMBDA1, FormKind.LAMBDA2


def matveev_constant(l: int, d_L: int, dps: Optional[int] = None) -> CReal:  # noqa: E741
    """1.4 * 30^(l+3) * l^4.5 * d_L^2 * (1 + log d_L)."""
    prec = working_prec(dps)
    l_root = CReal.exact(l, prec).sqrt()
    log_term = 1 + CReal.exact(d_L, prec).log()
    return MATVEEV_FACTOR * 30 ** (l + 3) * l**4 * d_L**2 * l_root * log_term


def matveev_coefficient(stage: LinearFormStage, dps: Optional[int] = None) -> CReal:
    """The constant multiplying (1 + log D)^(1 + number of log-scaled A_j)."""
    coefficient = matveev_constant(stage.l, stage.d_L, dps)
    for term in stage.params:
        coefficient = coefficient * term.param.A
    return coefficient


def matveev_lower_bound(
    stage: LinearFormStage, D_value: int, dps: Optional[int] = None
) -> CReal:
    """
    Upper bound for -log|Lambda|.

    Log-scaled A_j (second forms) are coefficients of (1 + log(s*n)); they are
    evaluated at (1 + log D_value), which is correct for D_value = s*n.
    """
    if D_value < 3:
        raise ConfigurationError(f"D must be at least 3, got {D_value}")
    prec = working_prec(dps)
    log_factor = 1 + CReal.exact(D_value, prec).log()
    bound = matveev_constant(stage.l, stage.d_L, dps) * log_factor
    for term in stage.params:
        A = term.param.A
        if term.param.log_scaled:
            A = A * log_factor
        bound = bound * A
    return bound


def _a_value(height: CReal, log_abs: CReal, d_L: int) -> CReal:
    return (d_L * height).maximum(abs(log_abs)).maximum(MIN_A)


def _root_param(rec: BinaryRecurrence, d_L: int, dps: Optional[int]) -> AlgebraicParam:
    log_root = sequences.root_dom(rec, dps).log()
    height = log_root / 2
    return AlgebraicParam(
        description=f"root_dom({rec.name})",
        height_bound=height,
        log_abs=log_root,
        A=_a_value(height, log_root, d_L),
    )


def _assumption(which: FormKind, pair: RecurrencePair) -> str:
    dU, dV = pair.U.discriminant, pair.V.discriminant
    return (
        f"{which.value} != 0: a vanishing form would make a power of root_dom({pair.U.name}) "
        f"lie in Q(sqrt({dV})), and Q(sqrt({dU})) != Q(sqrt({dV})); "
        "norm argument in the biquadratic field, assumed and not computed"
    )


def build_stage(
    which: FormKind,
    pair: RecurrencePair,
    m_height: Optional[CReal] = None,
    dps: Optional[int] = None,
) -> LinearFormStage:
    """
    Populate one linear form for ``pair``.

    Second forms need ``m_height``: the coefficient H with
    h(eta_1) < H * (1 + log(s*n)), produced by ``stage1_m_bound``.
    """
    prec = working_prec(dps)
    d_L = 4
    U, V = pair.U, pair.V
    alpha, gamma = sequences.root_dom(U, dps), sequences.root_dom(V, dps)
    sqrt_dU = CReal.exact(U.discriminant, prec).sqrt()
    sqrt_dV = CReal.exact(V.discriminant, prec).sqrt()
    orientation = 1 if decide(alpha, lambda x: x.lt(gamma)) else -1
    small, large = (alpha, gamma) if orientation == 1 else (gamma, alpha)
    log_base = large.log()

    root_u = ParamTerm(param=_root_param(U, d_L, dps), exponent="k")
    if which.is_first:
        eta1 = V.discriminant / sqrt_dU
        height = sequences.quadratic_surd_height(Fraction(V.discriminant**2, U.discriminant), dps)
        log_eta = eta1.log()
        eta_term = ParamTerm(
            param=AlgebraicParam(
                description=f"{V.discriminant}/sqrt({U.discriminant})",
                height_bound=height,
                log_abs=log_eta,
                A=_a_value(height, log_eta, d_L),
            ),
            exponent="1",
        )
        params = [eta_term, root_u, ParamTerm(param=_root_param(V, d_L, dps), exponent="-(m+n)")]
        rhs_coeff = 2 * eta1.maximum(3)
        decay_var = "m"
        eta1_scale = None
        eta1_exponent = 1
    else:
        if m_height is None:
            raise ConfigurationError(
                f"{which.value} needs the height coefficient from the first-form bound"
            )
        eta1 = None
        eta1_scale = sqrt_dU / sqrt_dV
        eta_term = ParamTerm(
            param=AlgebraicParam(
                description=f"sqrt({U.discriminant}) {V.name}_m / sqrt({V.discriminant})",
                height_bound=m_height,
                A=d_L * m_height,
                log_scaled=True,
            ),
            exponent="-1",
        )
        params = [eta_term, root_u, ParamTerm(param=_root_param(V, d_L, dps), exponent="-n")]
        inverse = (1 / sqrt_dU).maximum(1 / sqrt_dV)
        lift = math.ceil((gamma**3 / alpha).maximum(1).upper)
        rhs_coeff = 2 * sqrt_dV * inverse * lift
        decay_var = "n"
        eta1_exponent = -1

    stage = LinearFormStage(
        which=which,
        pair=pair,
        d_L=d_L,
        params=params,
        d_multiple=sequences.d_multiple(pair, dps),
        rhs_coeff=rhs_coeff,
        decay_base=gamma**2,
        decay_var=decay_var,
        tau=small.log() / log_base,
        log_base=log_base,
        orientation=orientation,
        eta1_exponent=eta1_exponent,
        eta1=eta1,
        eta1_scale=eta1_scale,
        assumption=_assumption(which, pair),
    )
    logger.debug(f"Built {which.value} for {pair.label}: rhs {rhs_coeff.to_decimal()}")
    return stage


def eta1_value(stage: LinearFormStage, m: Optional[int] = None) -> CReal:
    """eta_1 of the stage; second forms need the m it is evaluated at."""
    if stage.eta1 is not None:
        return stage.eta1
    if m is None or stage.eta1_scale is None:
        raise ConfigurationError(f"{stage.which.value}: eta_1 depends on m, none given")
    return stage.eta1_scale * sequences.term(stage.pair.V, m)


def linear_form_value(
    stage: LinearFormStage, k: int, m: int, n: int, dps: Optional[int] = None
) -> CReal:
    """Certified value of Lambda at (k, m, n)."""
    alpha = sequences.root_dom(stage.pair.U, dps)
    gamma = sequences.root_dom(stage.pair.V, dps)
    eta = eta1_value(stage, m) ** stage.eta1_exponent
    gamma_exponent = m + n if stage.which.is_first else n
    return eta * alpha**k / gamma**gamma_exponent - 1


def rhs_value(stage: LinearFormStage, m: int, n: int) -> CReal:
    exponent = m if stage.decay_var == "m" else n
    return stage.rhs_coeff / stage.decay_base**exponent


def _growth(s: int, x: int, p: int, prec: int) -> CReal:
    if p == 0:
        return CReal.exact(1, prec)
    return (1 + CReal.exact(s * x, prec).log()) ** p


def solve_exponent_bound(
    linear_coeff: CReal, offset: CReal, C: CReal, s: int, p: int
) -> int:
    """
    Smallest N with linear_coeff * x - offset >= C * (1 + log(s*x))^p for all x >= N.

    Runs the fixed point x <- ceil((C * (1 + log(s*x))^p + offset) / linear_coeff),
    then certifies the difference is >= 0 at N, < 0 at N - 1 and increasing from N on.
    """
    if not decide(linear_coeff, lambda x: x.gt(0)) or not decide(C, lambda x: x.gt(0)):
        raise ConfigurationError("linear_coeff and C must be positive")
    if p not in (0, 1, 2):
        raise ConfigurationError(f"Power must be 0, 1 or 2, got {p}")
    prec = max(linear_coeff.prec, offset.prec, C.prec)

    def difference(x: int) -> CReal:
        return linear_coeff * x - offset - C * _growth(s, x, p, prec)

    def step(x: int) -> int:
        target = (C * _growth(s, x, p, prec) + offset) / linear_coeff
        return max(1, math.ceil(target.upper))

    def is_nonnegative(value: CReal) -> Optional[bool]:
        return value.ge(0)

    x = max(1, math.ceil(C.upper))
    for iteration in range(FIXED_POINT_ITERATIONS):
        following = step(x)
        if following == x:
            break
        x = following
    else:
        raise SolverError(
            f"Fixed-point iteration did not settle after {FIXED_POINT_ITERATIONS} steps"
        )

    while not decide(difference(x), is_nonnegative):
        x += 1
    while x > 1 and decide(difference(x - 1), is_nonnegative):
        x -= 1

    if p == 0:
        slope = linear_coeff
    else:
        slope = linear_coeff - C * p * _growth(s, x, p - 1, prec) / x
    if s * x <= 1 or not decide(slope, lambda v: v.gt(0)):
        raise SolverError(f"Difference is not increasing past N = {x}")

    logger.debug(f"Exponent bound settled at {x} after {iteration + 1} iterations")
    return x


def height_offset(pair: RecurrencePair, dps: Optional[int] = None) -> CReal:
    """h0 = max(0, log(max(dU, dV)) / 2 - log gamma), so h(eta_1) < m log gamma + h0."""
    prec = working_prec(dps)
    widest = CReal.exact(max(pair.U.discriminant, pair.V.discriminant), prec).log() / 2
    return (widest - sequences.root_dom(pair.V, dps).log()).maximum(0)


def stage1_m_bound(pair: RecurrencePair, dps: Optional[int] = None) -> StageBound:
    """
    First-form bound: m log gamma < m_coefficient * (1 + log(s*n)), and the
    height coefficient that feeds A_1 of the second form.
    """
    first, _ = form_kinds(pair)
    stage = build_stage(first, pair, dps=dps)
    coefficient = matveev_coefficient(stage, dps)
    linear = stage.decay_base.log()
    offset = stage.rhs_coeff.log()
    # m * 2 log(gamma) < C1 (1 + log sn) + log R1 <= (C1 + max(log R1, 0)) (1 + log sn)
    m_coefficient = (coefficient + offset.maximum(0)) / 2
    height_coefficient = m_coefficient + height_offset(pair, dps)
    bound = StageBound(
        which=first,
        coefficient=coefficient,
        power=1,
        d_multiple=stage.d_multiple,
        linear_coeff=linear,
        offset=offset,
        m_coefficient=m_coefficient,
        height_coefficient=height_coefficient,
    )
    logger.info(
        f"{first.value}: Matveev coefficient {coefficient.to_decimal(6)}, "
        f"m log(gamma) < {m_coefficient.to_decimal(6)} (1 + log({stage.d_multiple}n))"
    )
    return bound


def absolute_bound(pair: RecurrencePair, dps: Optional[int] = None) -> AbsoluteBound:
    """First form -> m bound -> second form -> n < N for every solution with n > m."""
    first = stage1_m_bound(pair, dps)
    _, second_kind = form_kinds(pair)
    stage = build_stage(second_kind, pair, m_height=first.height_coefficient, dps=dps)
    coefficient = matveev_coefficient(stage, dps)
    linear = stage.decay_base.log()
    offset = stage.rhs_coeff.log()
    s = stage.d_multiple

    n_bound = solve_exponent_bound(linear, offset, coefficient, s, 2)
    second = StageBound(
        which=second_kind,
        coefficient=coefficient,
        power=2,
        d_multiple=s,
        linear_coeff=linear,
        offset=offset,
        resulting_bound=n_bound,
    )

    prec = working_prec(dps)
    m_coefficient = first.m_coefficient or CReal.exact(0, prec)
    m_real = m_coefficient * (1 + CReal.exact(s * n_bound, prec).log())
    m_bound = math.floor((m_real / sequences.root_dom(pair.V, dps).log()).upper) + 1
    logger.info(
        f"{pair.label}: n < {n_bound:.3e}, m < {m_bound:.3e}, "
        f"Matveev coefficient {coefficient.to_decimal(6)}"
    )
    return AbsoluteBound(
        first=first.model_copy(update={"resulting_bound": m_bound}),
        second=second,
        d_multiple=s,
        n_bound=n_bound,
        m_bound=m_bound,
        M=s * n_bound,
    )
