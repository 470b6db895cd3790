"""
Centralized configuration management for soliton-lab.

Two layers:

- ``Settings``: process-level options from the environment / ``.env`` (log level, output
  directory, parallelism, progress bars).
- ``RunConfig``: the per-run numerical configuration, read from a plain ``key=value`` file.

Usage:
    from soliton_lab.config import get_settings, load_run_config

    settings = get_settings()
    cfg = load_run_config("runs/census.cfg", eps=0.025)
"""

import hashlib
import math
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from soliton_lab.errors import ConfigError
from soliton_lab.models import EvolveConfig, ModelParams, RelaxConfig
from soliton_lab.models.runs import CFL_LIMIT
from soliton_lab.physics.lattice import Grid


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    All settings have defaults suitable for a laptop run.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    log_level: str = "INFO"
    output_dir: str = "runs"
    max_workers: int = 1
    show_progress: bool = True


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached application settings.

    Returns the same Settings instance on subsequent calls (cached).
    Use get_settings.cache_clear() to reset the cache if needed.
    """
    return Settings()


def get_fresh_settings() -> Settings:
    """
    Get fresh (non-cached) application settings.

    Useful for testing when you need to reload settings from environment.
    """
    return Settings()


class RunConfig(BaseModel):
    """Flat per-run configuration; every key has a default and unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # Model
    phi0: float = Field(1.0, gt=0)
    psi0: float = Field(2.0, gt=0)

    # Grid
    x_min: float = -20.0
    x_max: float = 20.0
    eps: float = Field(0.05, gt=0)

    # Relaxation
    step_amplitude: float = Field(0.01, gt=0)
    anneal_factor: float = Field(0.5, gt=0, lt=1)
    max_sweeps: int = Field(200_000, ge=1)
    tol: float = Field(1e-10, gt=0)
    window: int = Field(100, ge=1)
    min_amplitude: float = Field(1e-9, gt=0)
    rng_seed: int = 42
    v_core_floor: float = Field(0.165, ge=0, lt=1)

    # Evolution
    dt: float | None = Field(None, gt=0)
    t_end: float = Field(50.0, gt=0)
    snapshot_every: int = Field(50, ge=1)
    boundary: Literal["pinned"] = "pinned"

    # Classification
    charge_tolerance: float = Field(0.05, gt=0)

    # Decay experiment
    decay_factor_min: float = Field(1.1, gt=0)
    decay_factor_max: float = Field(2.0, gt=0)
    decay_factor_step: float = Field(0.1, gt=0)
    decay_t_end: float = Field(30.0, gt=0)
    separation_threshold: float = Field(5.0, gt=0)

    # Output
    output_dir: str = "runs"
    max_workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        if self.x_max <= self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        if self.dt is not None and self.dt > CFL_LIMIT * self.eps:
            bound = CFL_LIMIT * self.eps
            raise ValueError(f"dt={self.dt} violates the CFL bound dt <= {CFL_LIMIT}*eps = {bound}")
        if self.decay_factor_max < self.decay_factor_min:
            raise ValueError("decay_factor_max must not be below decay_factor_min")
        return self

    @property
    def model_params(self) -> ModelParams:
        return ModelParams(phi0=self.phi0, psi0=self.psi0)

    @property
    def grid(self) -> Grid:
        return Grid.from_spacing(self.x_min, self.x_max, self.eps)

    @property
    def relax_config(self) -> RelaxConfig:
        return RelaxConfig(
            step_amplitude=self.step_amplitude,
            anneal_factor=self.anneal_factor,
            max_sweeps=self.max_sweeps,
            tol=self.tol,
            window=self.window,
            min_amplitude=self.min_amplitude,
            rng_seed=self.rng_seed,
            v_core_floor=self.v_core_floor,
        )

    @property
    def evolve_config(self) -> EvolveConfig:
        return EvolveConfig(
            dt=self.dt,
            t_end=self.t_end,
            snapshot_every=self.snapshot_every,
            boundary=self.boundary,
        )

    @property
    def decay_evolve_config(self) -> EvolveConfig:
        return self.evolve_config.model_copy(update={"t_end": self.decay_t_end})

    @property
    def decay_factors(self) -> tuple[float, ...]:
        """Pump factors from decay_factor_min in steps that never pass decay_factor_max."""
        span = self.decay_factor_max - self.decay_factor_min
        # Slack for spans that are an exact multiple of the step up to round-off
        count = math.floor(span / self.decay_factor_step + 1e-9)
        return tuple(
            round(self.decay_factor_min + k * self.decay_factor_step, 10) for k in range(count + 1)
        )


def config_hash(cfg: RunConfig) -> str:
    """SHA-256 of the JSON dump, with every field in declaration order."""
    canonical = cfg.model_dump_json()
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_run_config(path: str | Path | None = None, **overrides: Any) -> RunConfig:
    """
    Build a RunConfig from a ``key=value`` file plus explicit overrides.

    Overrides whose value is None are ignored, so CLI options can be passed straight through.

    Raises:
        ConfigError: Missing file, unknown key or invalid value
    """
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        for key, value in dotenv_values(path).items():
            values[key.strip().lower()] = value
    values.update({key: value for key, value in overrides.items() if value is not None})
    # An empty value means "use the default"
    values = {key: value for key, value in values.items() if value not in (None, "")}
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration: {e}") from e
