from .certificate import (
    Certificate,
    CertificateConfig,
    ConvergentRecord,
    EnvironmentRecord,
    ReductionRecord,
    SearchRecord,
)
from .fields import BigInt, Real
from .linear_form import (
    AbsoluteBound,
    AlgebraicParam,
    FormKind,
    LinearFormStage,
    ParamTerm,
    StageBound,
)
from .recurrence import BinaryRecurrence, Equation, RecurrencePair, SolutionTriple
from .reduction import (
    ConvergentTable,
    FamilyOutcome,
    ReductionInstance,
    ReductionOutcome,
    Sign,
)

__all__ = [
    "AbsoluteBound",
    "AlgebraicParam",
    "BigInt",
    "BinaryRecurrence",
    "Certificate",
    "CertificateConfig",
    "ConvergentRecord",
    "ConvergentTable",
    "EnvironmentRecord",
    "Equation",
    "FamilyOutcome",
    "FormKind",
    "LinearFormStage",
    "ParamTerm",
    "Real",
    "RecurrencePair",
    "ReductionInstance",
    "ReductionOutcome",
    "ReductionRecord",
    "SearchRecord",
    "Sign",
    "SolutionTriple",
    "StageBound",
]
