from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from knotpursuit.polycore import (
    CompiledBatch,
    FEntry,
    Polynomial,
    PolyEvaluator,
    PolyRegistry,
)


@dataclass(frozen=True, eq=False)
class VanishingModel:
    """Vanishing (G) and nonvanishing (F) polynomials of one fitted point set."""

    registry: PolyRegistry
    method: str = "vca"
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def G(self) -> dict[int, tuple[Polynomial, ...]]:
        return self.registry.g_layers()

    @property
    def F(self) -> dict[int, tuple[FEntry, ...]]:
        return self.registry.f_layers()

    def vanishing_polynomials(self) -> list[Polynomial]:
        return self.registry.vanishing_polynomials()

    @cached_property
    def _g_batch(self) -> CompiledBatch:
        return CompiledBatch(self.vanishing_polynomials(), self.registry)

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.vanishing_polynomials()]

    @property
    def n_features(self) -> int:
        return len(self.vanishing_polynomials())

    @property
    def n_nonvanishing(self) -> int:
        return len(self.registry.nonvanishing_entries())

    @property
    def mean_degree(self) -> float:
        degrees = self.degrees
        return float(np.mean(degrees)) if degrees else 0.0

    def evaluate_vanishing(self, points) -> np.ndarray:
        """N x |G| matrix of every vanishing polynomial, in degree order."""
        evaluator = PolyEvaluator(self.registry, points)
        if not self._g_batch.size:
            return np.zeros((evaluator.points.shape[0], 0))
        return self._g_batch.evaluate(evaluator)

    def vanishing_norms(self, points) -> np.ndarray:
        return np.linalg.norm(self.evaluate_vanishing(points), axis=0)
