from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application
    app_name: str = "Knot Pursuit"
    debug: bool = False
    log_level: str = "INFO"

    # Tolerances
    epsilon: float = 0.1
    delta: Optional[float] = None  # None = 0.01 * epsilon
    lam: float = 0.01
    gamma: float = 0.9
    eta_floor_snap: float = 1e-12
    svd_rank_tol: float = 1e-10
    pinv_rcond: float = 1e-10

    # Safety caps
    max_degree: int = 10
    max_resets: int = 20
    oracle_max_degree: int = 6

    # Data knotting optimizer
    optimizer_max_iters: int = 200
    optimizer_gtol: float = 1e-8
    optimizer_step_tol: float = 1e-12
    fd_rel_step: float = 1e-6
    analytic_gradient: bool = True
    squared_norms: bool = False
    anchor_to_source: bool = True
    n_jobs: int = 1
    max_sweeps_per_eta: int = 5
    knot_move_tol: float = 1e-6

    # Experiments
    runs: int = 10
    seed: int = 0
    train_fraction: float = 0.6
    cv_folds: int = 3
    epsilon_grid: list[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3, 0.5])
    lambda_grid: list[float] = Field(default_factory=lambda: [0.001, 0.01])
    hd_fraction: float = 0.5
    knot_merge_tol: float = 1e-3
    linear_reg: float = 1.0
    record_runtime: bool = True

    # API
    api_host: str = "0.0.0.0"
    api_port: int = 8000

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "KNOT_",
        "extra": "ignore",
    }

    @property
    def effective_delta(self) -> float:
        return self.delta if self.delta is not None else 0.01 * self.epsilon


settings = Settings()
