from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

BackendName = Literal["exact-segment", "trotter4"]
LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="SFQSIM_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    output_dir: Path = Path("runs")
    log_level: LogLevel = "INFO"
    workers: int = 1
    backend: BackendName = "exact-segment"
    trotter_substeps: int = 4

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, value: object) -> object:
        if isinstance(value, str):
            return value.strip().upper()
        return value

    @field_validator("workers", "trotter_substeps")
    @classmethod
    def positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value


@lru_cache
def get_settings() -> Settings:
    return Settings()
