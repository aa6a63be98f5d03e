from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from knotpursuit.basis.model import VanishingModel


class TruncationReason(str, Enum):
    MAX_DEGREE = "max_degree"
    MAX_RESETS = "max_resets"


class PursuitDiagnostics(BaseModel):
    eta_trace: list[float] = Field(default_factory=list)
    resets: int = 0
    reset_etas: list[float] = Field(default_factory=list)
    per_degree_g: dict[int, int] = Field(default_factory=dict)
    per_degree_f: dict[int, int] = Field(default_factory=dict)
    max_g_x0: float = 0.0
    max_g_z: float = 0.0
    truncated: bool = False
    truncation_reason: Optional[TruncationReason] = None
    discarded: int = 0
    knot_sweeps: int = 0
    nonfinite_rows: int = 0
    line_search_failures: int = 0


@dataclass(frozen=True, eq=False)
class KnotModel(VanishingModel):
    """A fitted model: vanishing polynomials plus the data knots they vanish on."""

    method: str = "knot_pursuit"
    knots: Optional[np.ndarray] = None
    report: PursuitDiagnostics = field(default_factory=PursuitDiagnostics)

    @property
    def Z(self) -> np.ndarray:
        return self.knots

    @property
    def n_knots(self) -> int:
        return 0 if self.knots is None else int(self.knots.shape[0])
