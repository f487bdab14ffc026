from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from shared.models.fields import BigInt


class Equation(str, Enum):
    """Which product equation a pair encodes: U_k = V_m * V_n."""

    FPP = "fpp"  # F_k = P_m * P_n
    FFP = "ffp"  # P_k = F_m * F_n
    CUSTOM = "custom"


class BinaryRecurrence(BaseModel):
    """u_{n+2} = a * u_{n+1} + b * u_n with initial terms u0, u1."""

    model_config = ConfigDict(frozen=True)

    name: str
    a: int
    b: int
    u0: int = 0
    u1: int = 1

    @property
    def discriminant(self) -> int:
        return self.a * self.a + 4 * self.b

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.u0, self.u1)


class RecurrencePair(BaseModel):
    """The sequence on the left (U) and the one multiplied on the right (V)."""

    model_config = ConfigDict(frozen=True)

    equation: Equation
    U: BinaryRecurrence
    V: BinaryRecurrence
    label: str = Field(default="", description="Human-readable name, e.g. 'F_k = P_m P_n'")


class SolutionTriple(BaseModel):
    """A solution U_k = V_m * V_n with m <= n."""

    model_config = ConfigDict(frozen=True)

    equation: Equation
    k: int
    m: int
    n: int
    value: BigInt
