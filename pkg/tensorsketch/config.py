"""
Configuration settings for the tensorsketch package.
"""

from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application settings
    app_name: str = "tensorsketch"
    version: str = "1.0.0"
    debug: bool = Field(default=False)

    # Logging settings
    log_level: str = Field(default="INFO")
    log_dir: Path = Field(default=Path("logs"))
    log_to_file: bool = Field(default=False)

    # Spectral norm estimator defaults
    norm_restarts: int = Field(default=10, description="Multi-start count for power iteration")
    norm_max_iters: int = Field(default=200, description="Sweeps per restart")
    norm_tol: float = Field(default=1e-9, description="Relative objective change to stop")

    # Numerical tolerances
    gap_degenerate_rtol: float = Field(default=1e-12)
    orthonormality_tol: float = Field(default=1e-10)

    # Workflow settings
    max_workers: int = Field(default=4, description="Worker threads for sweep trials")
    bootstrap_resamples: int = Field(default=200)

    @field_validator("norm_restarts", "norm_max_iters", "max_workers", "bootstrap_resamples")
    @classmethod
    def validate_positive_int(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("norm_tol", "gap_degenerate_rtol", "orthonormality_tol")
    @classmethod
    def validate_positive_float(cls, v):
        if not v > 0:
            raise ValueError("must be positive")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v}")
        return level

    class Config:
        env_prefix = "TENSORSKETCH_"
        env_file = ".env"
        case_sensitive = False


# Global settings instance
settings = Settings()
