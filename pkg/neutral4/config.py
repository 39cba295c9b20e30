from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple

from pydantic_settings import BaseSettings, SettingsConfigDict

REPO_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """
    Toolkit settings loaded from environment variables.

    Load order:
    1. Environment variables prefixed with NEUTRAL4_ (highest priority)
    2. .env file in the working directory
    3. Field defaults (lowest priority)
    """

    model_config = SettingsConfigDict(
        env_prefix="NEUTRAL4_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    log_level: str = "WARNING"

    # Corpus locations
    models_dir: Path = REPO_ROOT / "models"
    golden_dir: Path = REPO_ROOT / "golden"

    # Sampling
    default_samples: int = 100
    default_seed: Optional[int] = None
    domain_default_low: float = -10.0
    domain_default_high: float = 10.0
    max_rejection_draws: int = 10000

    # Tolerance ladder
    tol_exact: float = 1e-12
    tol_algebraic: float = 1e-10
    tol_first_derivative: float = 1e-9
    tol_curvature: float = 1e-8

    # Pointwise linear algebra
    signature_eigen_threshold: float = 1e-10
    independence_threshold: float = 1e-8
    singular_condition_limit: float = 1e12
    jacobian_det_threshold: float = 1e-12
    frame_degeneracy_threshold: float = 1e-10
    frame_jitter_attempts: int = 3
    frame_jitter_magnitude: float = 1e-6
    rank_relative_threshold: float = 1e-9
    plane_trials_per_point: int = 3
    jitter_shifts: Tuple[Tuple[float, float, float, float], ...] = ((0.37, -1.1, 0.53, 0.29), (-0.8, 0.41, 1.3, -0.6))

    # Concurrency
    max_concurrent_points: int = 8

    # Finite-difference oracle
    ad_oracle_step_coarse: float = 1e-4
    ad_oracle_step_fine: float = 1e-5
    ad_oracle_relative_tol: float = 1e-6

    # Hopf null Killing pair search
    hopf_attempts: int = 200
    hopf_seed: int = 42
    hopf_threshold: float = 1e-4
    hopf_max_evaluations: int = 10000
    hopf_margin: float = 0.1
    hopf_conditioning_floor: float = 0.1
    hopf_control_tolerance: float = 1e-8


@lru_cache()
def get_settings() -> Settings:
    """Return cached settings instance."""
    return Settings()
