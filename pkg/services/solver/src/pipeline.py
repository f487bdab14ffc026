"""
Orchestration: validate -> bound -> reduce -> search -> certificate.
"""
import logging
import time
from pathlib import Path
from typing import Optional

import mpmath
import pydantic
import sympy

from shared.models import (
    AbsoluteBound,
    Certificate,
    CertificateConfig,
    ConvergentRecord,
    EnvironmentRecord,
    Equation,
    FormKind,
    RecurrencePair,
    ReductionRecord,
    SearchRecord,
    Sign,
)
from shared.realcore import precision_cap
from shared.utils.config import Settings, get_settings
from shared.utils.errors import BudgetError, ConfigurationError, PairValidationError, SolverError

from . import __version__
from .certificate_repository import CertificateRepository
from .linforms import absolute_bound, build_stage, form_kinds
from .reduction import (
    dp_reduce,
    expand,
    family_mu_values,
    gamma_to_lemma_form,
    min_decay_exponent,
    reduce_family,
)
from .search import search
from .sequences import builtin_pair, check_coarse_k_bound, check_growth_bounds, k_range, make_pair

logger = logging.getLogger(__name__)


class VerificationService:
    """Runs the full bound, reduce and search proof for one recurrence pair."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        certificate_repository: Optional[CertificateRepository] = None,
        precision: Optional[int] = None,
        k_max: Optional[int] = None,
        n_max: Optional[int] = None,
        convergent_start_index: Optional[int] = None,
    ):
        self.settings = settings or get_settings()
        self.certificate_repository = certificate_repository or CertificateRepository(
            self.settings.certificate_dir
        )
        self.precision = precision or self.settings.default_precision
        self.k_max = k_max or self.settings.k_max
        self.n_max = n_max or self.settings.n_max
        self.convergent_start_index = (
            convergent_start_index
            if convergent_start_index is not None
            else self.settings.convergent_start_index
        )
        if self.precision > self.settings.precision_cap:
            raise ConfigurationError(
                f"Precision {self.precision} exceeds the cap {self.settings.precision_cap}"
            )

    def validate(self, pair: RecurrencePair) -> RecurrencePair:
        """Structural checks, growth inequalities and the coarse k bound."""
        checked = make_pair(pair.U, pair.V, pair.equation, pair.label, dps=self.precision)
        for rec in (pair.U, pair.V):
            violations = check_growth_bounds(rec, self.settings.growth_check_n, self.precision)
            if violations:
                raise PairValidationError(
                    f"{rec.name}: growth inequalities fail at n = {violations[:5]}"
                )
        check_coarse_k_bound(pair, self.n_max, self.precision)
        return checked

    def bounds(self, pair: RecurrencePair) -> AbsoluteBound:
        return absolute_bound(pair, self.precision)

    def _check_guard(self, kind: FormKind, needed: int, guard: int, name: str) -> None:
        if guard < needed:
            raise ConfigurationError(
                f"{kind.value}: |Lambda| < 1/4 needs {name} >= {needed}, guard allows {guard}"
            )

    def reduce(self, pair: RecurrencePair, bounds: AbsoluteBound) -> ReductionRecord:
        """Both signs of the first form, then both signs of the second-form family."""
        first_kind, second_kind = form_kinds(pair)
        first = build_stage(first_kind, pair, dps=self.precision)
        second = build_stage(
            second_kind, pair, m_height=bounds.first.height_coefficient, dps=self.precision
        )
        self._check_guard(first_kind, min_decay_exponent(first), self.settings.m_guard, "m")
        self._check_guard(
            second_kind, min_decay_exponent(second), self.settings.n_guard + 1, "n"
        )

        M = bounds.M
        start = self.convergent_start_index
        table = expand(first.tau, 6 * M, self.settings.extra_convergents, min_length=start + 1)
        logger.info(f"Expanded tau to {len(table)} convergents (q > 6M = {6 * M:.3e})")

        first_outcomes = [
            dp_reduce(gamma_to_lemma_form(first, sign, M), table, start) for sign in Sign
        ]
        m_bound = max(outcome.exponent_bound for outcome in first_outcomes)
        m_effective = max(m_bound, self.settings.m_guard - 1)
        logger.info(f"{first_kind.value}: m <= {m_bound} (effective {m_effective})")

        m_values = list(range(1, m_effective + 1))
        second_outcomes = [
            reduce_family(
                gamma_to_lemma_form(second, sign, M, 1),
                family_mu_values(second, sign, M, m_values),
                table,
                start,
            )
            for sign in Sign
        ]
        n_bound = max(family.max_bound for family in second_outcomes)
        n_effective = max(n_bound, self.settings.n_guard)
        logger.info(f"{second_kind.value}: n <= {n_bound} (effective {n_effective})")

        used = {outcome.convergent_index for outcome in first_outcomes}
        used |= {
            member.convergent_index for family in second_outcomes for member in family.members
        }
        return ReductionRecord(
            tau=table.x,
            table_length=len(table),
            convergents=[
                ConvergentRecord(index=i, p=table.convergents[i][0], q=table.convergents[i][1])
                for i in sorted(used)
            ],
            first_form=first_outcomes,
            second_form=second_outcomes,
            m_bound=m_bound,
            n_bound=n_bound,
            m_bound_effective=m_effective,
            n_bound_effective=n_effective,
        )

    def search_stage(self, pair: RecurrencePair, reduction: ReductionRecord) -> SearchRecord:
        """Check the reduced ranges fit the budgets, then search the budgets exhaustively."""
        derived_n_max = reduction.n_bound_effective
        _, derived_k_max = k_range(pair, derived_n_max, derived_n_max, self.precision)
        if derived_n_max > self.n_max or derived_k_max > self.k_max:
            raise BudgetError(
                f"Reduced ranges k <= {derived_k_max}, n <= {derived_n_max} exceed the "
                f"search budget k <= {self.k_max}, n <= {self.n_max}"
            )

        solutions = search(pair, self.k_max, self.n_max)
        for solution in solutions:
            k_lo, k_hi = k_range(pair, solution.m, solution.n, self.precision)
            if not k_lo <= solution.k <= k_hi:
                raise SolverError(
                    f"k bracket [{k_lo}, {k_hi}] excludes solution "
                    f"({solution.k}, {solution.m}, {solution.n})"
                )
        return SearchRecord(
            k_max=self.k_max,
            n_max=self.n_max,
            derived_k_max=derived_k_max,
            derived_n_max=derived_n_max,
            solutions=solutions,
            k_values=sorted({s.k for s in solutions}),
        )

    def _config(self, pair: RecurrencePair) -> CertificateConfig:
        return CertificateConfig(
            pair=pair,
            precision=self.precision,
            precision_cap=self.settings.precision_cap,
            k_max=self.k_max,
            n_max=self.n_max,
            m_guard=self.settings.m_guard,
            n_guard=self.settings.n_guard,
            convergent_start_index=self.convergent_start_index,
            extra_convergents=self.settings.extra_convergents,
        )

    def _environment(self) -> EnvironmentRecord:
        return EnvironmentRecord(
            default_precision=self.precision,
            precision_cap=self.settings.precision_cap,
            versions={
                "solver": __version__,
                "mpmath": mpmath.__version__,
                "sympy": sympy.__version__,
                "pydantic": pydantic.VERSION,
            },
        )

    def verify(self, pair: RecurrencePair) -> Certificate:
        """
        Prove that the search budgets hold every solution and list them.

        Returns:
            Certificate with all bounds, reductions and solutions

        Raises:
            PairValidationError: pair fails a structural check
            PrecisionError: a certified comparison stayed undecided at the cap
            ReductionError: no usable convergent
            BudgetError: reduced ranges exceed the search budget
        """
        with precision_cap(self.settings.precision_cap):
            return self._verify(pair)

    def _verify(self, pair: RecurrencePair) -> Certificate:
        started = time.perf_counter()
        logger.info(f"Starting verification of {pair.label}...")
        try:
            logger.info("Step 1: Validating the recurrence pair...")
            pair = self.validate(pair)

            logger.info("Step 2: Bounding the indices with linear forms in logarithms...")
            bounds = self.bounds(pair)

            logger.info("Step 3: Reducing the bounds with continued fractions...")
            reduction = self.reduce(pair, bounds)

            logger.info("Step 4: Searching the reduced ranges...")
            search_record = self.search_stage(pair, reduction)
        except SolverError as e:
            logger.error(
                f"Verification of {pair.label} failed: {e}",
                exc_info=True,
                extra={"equation": pair.equation.value},
            )
            raise

        first_kind, second_kind = form_kinds(pair)
        assumptions = [
            build_stage(first_kind, pair, dps=self.precision).assumption,
            build_stage(
                second_kind, pair, m_height=bounds.first.height_coefficient, dps=self.precision
            ).assumption,
        ]
        certificate = Certificate(
            equation=pair.equation,
            config=self._config(pair),
            assumptions=assumptions,
            stage1=bounds,
            stage2=reduction,
            stage3=search_record,
            environment=self._environment(),
            verified=True,
        )
        logger.info(
            f"Verification complete in {time.perf_counter() - started:.1f}s: "
            f"k in {search_record.k_values}, {len(search_record.solutions)} solutions"
        )
        return certificate

    def verify_and_save(
        self, pair: RecurrencePair, path: Optional[Path] = None
    ) -> tuple[Certificate, Path]:
        """Verify and write the certificate; returns it with the path written."""
        certificate = self.verify(pair)
        return certificate, self.certificate_repository.save(certificate, path)


def verify_theorem(
    equation: Equation, service: Optional[VerificationService] = None
) -> Certificate:
    """Run the proof for one of the built-in equations."""
    service = service or VerificationService()
    return service.verify(builtin_pair(equation))
