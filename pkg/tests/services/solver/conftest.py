"""
Pytest configuration and shared fixtures for solver service tests
"""
import pytest
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent.parent.parent
sys.path.insert(0, str(project_root))

from services.solver.src.linforms import absolute_bound, build_stage  # noqa: E402
from services.solver.src.reduction import expand  # noqa: E402
from services.solver.src.sequences import builtin_pair  # noqa: E402
from shared.models import Equation, FormKind  # noqa: E402


@pytest.fixture(autouse=True)
def setup_logging():
    """Disable logging during tests unless explicitly needed"""
    import logging
    logging.disable(logging.CRITICAL)
    yield
    logging.disable(logging.NOTSET)


@pytest.fixture(scope="session")
def fpp_pair():
    """F_k = P_m P_n"""
    return builtin_pair(Equation.FPP)


@pytest.fixture(scope="session")
def ffp_pair():
    """P_k = F_m F_n"""
    return builtin_pair(Equation.FFP)


@pytest.fixture(scope="session")
def fpp_bounds(fpp_pair):
    return absolute_bound(fpp_pair)


@pytest.fixture(scope="session")
def ffp_bounds(ffp_pair):
    return absolute_bound(ffp_pair)


@pytest.fixture(scope="session")
def tau_table(fpp_pair):
    """Continued fraction of log(alpha)/log(gamma) past the published q_74."""
    tau = build_stage(FormKind.LAMBDA1, fpp_pair).tau
    return expand(tau, 10**37)
