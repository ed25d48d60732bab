"""Centralized configuration management using Pydantic Settings.

This module provides a single source of truth for all configuration values.
All settings can be overridden via environment variables prefixed with
``DQC1_`` (for example ``DQC1_DENSE_CAP=10``).
"""

from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator

from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    """Application settings with environment variable support.

    All settings can be overridden via environment variables.
    For example, DQC1_PAULI_TERM_CAP=8192 will override the default term cap.
    """

    model_config = SettingsConfigDict(
        env_prefix="DQC1_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # ========== Engine Limits ==========
    dense_cap: int = Field(
        default=12,
        ge=1,
        description="Largest register width (qubits) the dense engine will simulate"
    )
    pauli_term_cap: int = Field(
        default=4096,
        ge=1,
        description="Largest PauliSum the Heisenberg engine may grow before giving up"
    )
    prune_tolerance: float = Field(
        default=1e-15,
        description="Pauli coefficients below this magnitude are dropped after arithmetic"
    )

    # ========== Numerical Tolerances ==========
    state_tolerance: float = Field(
        default=1e-10,
        description="Hermiticity / unit-trace tolerance for density operators"
    )
    psd_check: bool = Field(
        default=False,
        description="Check positive semidefiniteness of every dense result (slow)"
    )
    psd_tolerance: float = Field(
        default=1e-8,
        description="Most negative eigenvalue accepted by the PSD check"
    )
    beta_undefined_r_tolerance: float = Field(
        default=1e-12,
        description="R is left undefined when beta^2 > 1 - this value"
    )
    witness_zero_tolerance: float = Field(
        default=1e-10,
        description="|v1| at or below this counts as zero in the entanglement witness"
    )
    witness_coherence_threshold: float = Field(
        default=1e-6,
        description="|v2| at or above this counts as genuine coherence"
    )
    corner_tolerance: float = Field(
        default=1e-10,
        description="Tolerance of the corner-fixing precondition check"
    )

    # ========== Experiment Configuration ==========
    fourier_brute_cap: int = Field(
        default=5,
        description="Largest width for the brute-force Fourier sign sum (2^(3w) terms)"
    )
    default_confidence: float = Field(
        default=0.99,
        gt=0.0,
        lt=1.0,
        description="Confidence level for Hoeffding half-widths"
    )
    experiment_workers: int = Field(
        default=1,
        ge=1,
        description="Thread pool size used to run experiment cases"
    )
    reports_dir: Path = Field(
        default=Path("reports"),
        description="Directory for experiment reports written by scripts"
    )

    # ========== Logging ==========
    log_level: str = Field(
        default="WARNING",
        description="Default log level when LOG_LEVEL is not set"
    )

    def get_reports_dir(self, project_dir: Path) -> Path:
        """Get absolute path to the reports directory.

        Args:
            project_dir: Project root directory

        Returns:
            Absolute path to reports directory
        """
        if self.reports_dir.is_absolute():
            return self.reports_dir
        return project_dir / self.reports_dir


# Global settings instance
# Environment variables are read the first time get_settings() is called
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the global settings instance.

    Creates and caches a Settings instance on first call.
    Subsequent calls return the cached instance.

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """Drop the cached instance and re-read the environment.

    Returns:
        Freshly constructed Settings instance
    """
    global _settings
    _settings = Settings()
    return _settings


@contextmanager
def override_settings(**updates: Any) -> Iterator[Settings]:
    """Install a validated copy of the settings with ``updates`` applied.

    The process environment is left alone; the previous instance is restored
    on exit. Command-line flags such as ``--dense-cap`` go through here.

    Raises:
        ValidationError: If an updated value is out of range
    """
    global _settings
    previous = _settings
    current = get_settings()
    _settings = Settings.model_validate({**current.model_dump(), **updates}) if updates else current
    try:
        yield _settings
    finally:
        _settings = previous
