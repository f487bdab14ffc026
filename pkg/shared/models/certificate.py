"""The replayable record of a verification run."""
from pydantic import BaseModel, ConfigDict, Field

from shared.models.fields import BigInt, Real
from shared.models.linear_form import AbsoluteBound
from shared.models.recurrence import Equation, RecurrencePair, SolutionTriple
from shared.models.reduction import FamilyOutcome, ReductionOutcome

CERTIFICATE_FORMAT = "1"


class CertificateConfig(BaseModel):
    """Everything a replay needs; the certificate is a function of this alone."""

    model_config = ConfigDict(frozen=True)

    pair: RecurrencePair
    precision: int
    precision_cap: int
    k_max: int
    n_max: int
    m_guard: int
    n_guard: int
    convergent_start_index: int
    extra_convergents: int


class ConvergentRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    p: BigInt
    q: BigInt


class ReductionRecord(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: Real
    table_length: int
    convergents: list[ConvergentRecord]
    first_form: list[ReductionOutcome]
    second_form: list[FamilyOutcome]
    m_bound: int = Field(..., description="Largest m left by the first-form reductions")
    n_bound: int = Field(..., description="Largest n left by the second-form reductions")
    m_bound_effective: int
    n_bound_effective: int


class SearchRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_max: int
    n_max: int
    derived_k_max: int
    derived_n_max: int
    solutions: list[SolutionTriple]
    k_values: list[int]


class EnvironmentRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    default_precision: int
    precision_cap: int
    versions: dict[str, str]


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    format_version: str = CERTIFICATE_FORMAT
    equation: Equation
    config: CertificateConfig
    assumptions: list[str]
    stage1: AbsoluteBound
    stage2: ReductionRecord
    stage3: SearchRecord
    environment: EnvironmentRecord
    verified: bool

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
