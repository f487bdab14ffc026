"""Solver service: bound, reduce and search proofs for U_k = V_m * V_n."""

__version__ = "0.1.0"

from .certificate_repository import CertificateRepository  # noqa: E402
from .pipeline import VerificationService, verify_theorem  # noqa: E402

__all__ = ["CertificateRepository", "VerificationService", "verify_theorem", "__version__"]
