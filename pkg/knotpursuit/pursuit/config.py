from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from knotpursuit.knotting.optimizer import OptimizerParams
from knotpursuit.settings import settings


class PursuitConfig(BaseModel):
    epsilon: float = Field(default_factory=lambda: settings.epsilon, gt=0)
    delta: Optional[float] = Field(default=None, ge=0)
    lam: float = Field(default_factory=lambda: settings.lam, ge=0)
    gamma: float = Field(default_factory=lambda: settings.gamma)
    eta_floor_snap: float = Field(default_factory=lambda: settings.eta_floor_snap, ge=0)
    max_degree: int = Field(default_factory=lambda: settings.max_degree, ge=1)
    max_resets: int = Field(default_factory=lambda: settings.max_resets, ge=0)
    squared_norms: bool = Field(default_factory=lambda: settings.squared_norms)
    anchor_to_source: bool = Field(default_factory=lambda: settings.anchor_to_source)
    n_jobs: int = Field(default_factory=lambda: settings.n_jobs, ge=1)
    max_sweeps_per_eta: int = Field(default_factory=lambda: settings.max_sweeps_per_eta, ge=1)
    knot_move_tol: float = Field(default_factory=lambda: settings.knot_move_tol, ge=0)
    vanishing_slack: float = Field(default=1e-8, ge=0)
    optimizer: OptimizerParams = Field(default_factory=OptimizerParams)

    @field_validator("gamma")
    @classmethod
    def check_gamma(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {v}")
        return v

    @model_validator(mode="after")
    def resolve_delta(self) -> "PursuitConfig":
        if self.delta is None:
            self.delta = 0.01 * self.epsilon
        if self.delta > self.epsilon:
            raise ValueError(f"delta ({self.delta}) must not exceed epsilon ({self.epsilon})")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "PursuitConfig":
        """Settings defaults with ``overrides`` on top; None values are ignored."""
        values = {
            "epsilon": settings.epsilon,
            "delta": settings.delta,
            "lam": settings.lam,
            "gamma": settings.gamma,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
