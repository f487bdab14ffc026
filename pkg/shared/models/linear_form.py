"""Models for the linear forms in logarithms and the bounds derived from them."""
from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from shared.models.fields import BigInt, Real
from shared.models.recurrence import RecurrencePair


class FormKind(str, Enum):
    """
    The four linear forms. LAMBDA1/LAMBDA3 are the first forms (right side
    decays in m) of the two equations, LAMBDA2/LAMBDA4 the second forms
    (right side decays in n, one parameter depends on m).
    """

    LAMBDA1 = "lambda1"
    LAMBDA2 = "lambda2"
    LAMBDA3 = "lambda3"
    LAMBDA4 = "lambda4"

    @property
    def is_first(self) -> bool:
        return self in (FormKind.LAMBDA1, FormKind.LAMBDA3)


class AlgebraicParam(BaseModel):
    """
    One eta_j of a linear form with the quantities Matveev's theorem needs.

    When ``log_scaled`` is set, ``height_bound`` and ``A`` are coefficients of
    (1 + log(s*n)) rather than absolute values.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    description: str
    height_bound: Real
    log_abs: Optional[Real] = None
    A: Real
    log_scaled: bool = False


class ParamTerm(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    param: AlgebraicParam
    exponent: str = Field(..., description="Symbolic exponent d_j, e.g. 'k' or '-(m+n)'")


class LinearFormStage(BaseModel):
    """A populated linear form |prod eta_j^d_j - 1| < rhs_coeff * decay_base^(-decay_var)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    which: FormKind
    pair: RecurrencePair
    l: int = 3  # noqa: E741
    d_L: int = 4
    params: list[ParamTerm]
    d_multiple: int = Field(..., description="s with D = max|d_j| <= s*n")
    rhs_coeff: Real
    decay_base: Real
    decay_var: Literal["m", "n"]
    tau: Real
    log_base: Real
    orientation: int = Field(..., description="+1 when the U root is the smaller one, else -1")
    eta1_exponent: int
    eta1: Optional[Real] = None
    eta1_scale: Optional[Real] = Field(
        default=None, description="eta_1 = eta1_scale * V_m for second forms"
    )
    assumption: str

    @property
    def D_expr(self) -> str:
        return f"{self.d_multiple}n"


class StageBound(BaseModel):
    """
    linear_coeff * x - offset < coefficient * (1 + log(s*n))^power.

    For the first form the inequality bounds m in terms of n; ``m_coefficient``
    and ``height_coefficient`` then carry the derived bounds
    m * log(gamma) < m_coefficient * (1 + log(s*n)) and
    h(eta_1 of the second form) < height_coefficient * (1 + log(s*n)).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    which: FormKind
    coefficient: Real
    power: int
    d_multiple: int
    linear_coeff: Real
    offset: Real
    resulting_bound: Optional[BigInt] = None
    m_coefficient: Optional[Real] = None
    height_coefficient: Optional[Real] = None


class AbsoluteBound(BaseModel):
    """Stage-one result: n < n_bound and m < m_bound for every solution with n > m."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    first: StageBound
    second: StageBound
    d_multiple: int
    n_bound: BigInt
    m_bound: BigInt
    M: BigInt = Field(..., description="Bound on every tau-coefficient, s * n_bound")
