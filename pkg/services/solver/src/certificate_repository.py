"""
Certificate files: write, read back and compare for replay.
"""
import logging
from pathlib import Path
from typing import Optional

from shared.models import Certificate, Equation
from shared.utils.config import get_settings
from shared.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


class CertificateRepository:
    """Single place for all certificate file access."""

    SUFFIX = ".json"

    def __init__(self, base_dir: Optional[Path] = None):
        self.base_dir = Path(base_dir or get_settings().certificate_dir)

    def default_path(self, equation: Equation, label: str = "") -> Path:
        stem = equation.value if equation != Equation.CUSTOM else f"custom-{label or 'pair'}"
        stem = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in stem)
        return self.base_dir / f"{stem}{self.SUFFIX}"

    def save(self, certificate: Certificate, path: Optional[Path] = None) -> Path:
        """
        Write the certificate as JSON.

        Args:
            certificate: Certificate to store
            path: Target file (default: <certificate_dir>/<equation>.json)

        Returns:
            Path that was written
        """
        target = Path(path) if path else self.default_path(
            certificate.equation, certificate.config.pair.label
        )
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(certificate.to_json() + "\n")
        logger.info(f"Certificate written to {target}")
        return target

    def load_text(self, path: Path) -> str:
        try:
            return Path(path).read_text()
        except OSError as e:
            raise ConfigurationError(f"Cannot read certificate {path}: {e}") from e

    def matches(self, certificate: Certificate, path: Path) -> bool:
        """True when the stored file is byte-identical to ``certificate``."""
        stored = self.load_text(path)
        identical = stored == certificate.to_json() + "\n"
        if not identical:
            logger.warning(f"Certificate {path} differs from the replayed run")
        return identical
