"""Core configuration for rotodo."""

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Analysis settings.

    Every value here is only a default: the services take the same knobs as
    explicit arguments, so a report is a function of its input and options.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore"
    )

    # Odometer conventions
    N_CONVENTION: Literal["geq", "strict"] = Field(
        default="geq",
        description="geq: N = min{n : 2^n >= q}; strict: N = min{n : 2^n > q}"
    )
    MAX_CELLS: int = Field(default=2**26, ge=1, description="Capacity bound on q*2^(kN) cells")

    # Report defaults
    DEFAULT_LEVELS: int = Field(default=6, ge=1, description="Height levels listed in reports")
    DEFAULT_DEPTH: int = Field(default=3, ge=1, description="Bratteli diagram depth")
    FIXED_POINT_PREFIX: int = Field(default=64, ge=1, description="Fixed point letters in reports")
    CODING_CHECK_LENGTH: int = Field(default=256, ge=1, description="Itinerary length for coding checks")
    REPORT_INCLUDE_TIMINGS: bool = Field(
        default=False,
        description="Add wall-clock timings to reports (breaks byte-identical reruns)"
    )

    # Spectral analysis
    DYADIC_SCAN_MAX_M: int = Field(default=20, ge=1, description="Largest m tested in d = 2^m scans")
    EIGEN_SEED: Literal["ones", "telescoped"] = Field(
        default="ones", description="Seed height vector for divisibility tests"
    )
    POWER_ITERATION_TOLERANCE: float = Field(default=1e-10, gt=0, description="Power iteration tolerance")
    POWER_ITERATION_MAX_STEPS: int = Field(default=20000, ge=1, description="Power iteration step cap")
    CLAMP_TOLERANCE: float = Field(default=1e-12, ge=0, description="Eigenvector entries below this are zero")

    # Surveys
    SURVEY_MAX_Q: int = Field(default=7, ge=1, description="Largest q accepted by survey")

    # Logging
    LOG_JSON: bool = Field(default=False, description="Emit JSON log lines")
    DEBUG: bool = Field(default=False, description="Debug mode")

    # HTTP API
    API_HOST: str = Field(default="127.0.0.1", description="API host")
    API_PORT: int = Field(default=8000, description="API port")


# Global settings instance
SETTINGS = Settings()
