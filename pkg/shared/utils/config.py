from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="BRS_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Precision (decimal digits)
    default_precision: int = Field(256, ge=32)
    precision_cap: int = Field(10_000, ge=32)

    # Search budgets
    k_max: int = Field(400, ge=1)
    n_max: int = Field(100, ge=1)

    # Reduction
    m_guard: int = Field(20, ge=1)
    n_guard: int = Field(100, ge=1)
    extra_convergents: int = Field(12, ge=0)
    convergent_start_index: int = Field(0, ge=0)

    # Validation gate for the growth inequalities
    growth_check_n: int = Field(500, ge=2)

    # Output
    certificate_dir: Path = Path("certificates")

    # Environment
    environment: str = "development"
    log_level: str = "INFO"


@lru_cache()
def get_settings() -> Settings:
    return Settings()
