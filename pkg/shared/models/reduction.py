"""Models for continued fractions and the reduction step."""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from shared.models.fields import BigInt, Real


class Sign(str, Enum):
    """Sign of the linear form being reduced."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class ConvergentTable(BaseModel):
    """Certified partial quotients of ``x`` and their convergents p_i/q_i."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: Real
    quotients: list[BigInt]
    convergents: list[tuple[BigInt, BigInt]]

    def __len__(self) -> int:
        return len(self.convergents)

    def q(self, index: int) -> int:
        return self.convergents[index][1]

    def first_index_above(self, bound: int, start: int = 0) -> Optional[int]:
        """Smallest index >= start with q_i > bound, or None."""
        for index in range(start, len(self.convergents)):
            if self.convergents[index][1] > bound:
                return index
        return None


class ReductionInstance(BaseModel):
    """0 < m*tau - n + mu < A * B^(-k) with m <= M."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    tau: Real
    mu: Real
    A: Real
    B: Real
    M: BigInt
    sign: Sign = Sign.POSITIVE
    m: Optional[int] = Field(default=None, description="Family index when mu depends on m")


class ReductionOutcome(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    sign: Sign
    m: Optional[int] = None
    convergent_index: int
    q: BigInt
    epsilon: Real
    exponent_bound: int
    q_exceeds_6M: bool
    epsilon_positive: bool


class FamilyOutcome(BaseModel):
    """Reduction of every member mu_m of a family sharing tau, A, B and M."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    sign: Sign
    min_epsilon: Real
    max_bound: int
    members: list[ReductionOutcome]
