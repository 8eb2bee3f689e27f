from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Parallelism
    workers: int = Field(default=1, ge=1, validation_alias="NILPRIME_WORKERS")

    # Output
    output_dir: Path = Field(default=Path("./results"), validation_alias="NILPRIME_OUTPUT_DIR")

    # Resource guards
    max_sieve_limit: int = Field(
        default=10**8, ge=2, le=10**8, validation_alias="NILPRIME_MAX_SIEVE_LIMIT"
    )
    max_work: int = Field(default=5 * 10**8, ge=1, validation_alias="NILPRIME_MAX_WORK")

    # Logging
    log_level: str = Field(default="INFO", validation_alias="LOG_LEVEL")
    debug: bool = Field(default=False, validation_alias="DEBUG")

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore",
    }


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
