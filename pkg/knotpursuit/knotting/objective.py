from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.polycore import (
    CompiledBatch,
    FEntry,
    Polynomial,
    PolyEvaluator,
    PolyRegistry,
    as_point,
)


@dataclass(frozen=True)
class KnotObjectiveSpec:
    g_layers: Mapping[int, Sequence[Polynomial]]
    f_layers: Mapping[int, Sequence[FEntry]]
    lam: float
    reg_max_degree: int
    squared_norms: bool = False

    def __post_init__(self):
        if self.lam < 0:
            raise InputError(f"lambda must be >= 0, got {self.lam}")
        has_f = any(k >= 1 and entries for k, entries in self.f_layers.items())
        if has_f and self.reg_max_degree < 1:
            raise InputError("reg_max_degree must be >= 1 when nonvanishing layers exist")

    @classmethod
    def from_layers(
        cls,
        g_layers: Mapping[int, Sequence[Polynomial]],
        f_layers: Mapping[int, Sequence[FEntry]],
        lam: float,
        squared_norms: bool = False,
    ) -> "KnotObjectiveSpec":
        """Regularize up to the degree of the first vanishing polynomial, or every
        available F layer when nothing vanishes yet."""
        g_degrees = [k for k, polys in g_layers.items() if k >= 1 and polys]
        f_degrees = [k for k, entries in f_layers.items() if k >= 1 and entries]
        if g_degrees:
            reg = min(g_degrees)
        else:
            reg = max(f_degrees, default=0)
        if f_degrees and reg < 1:
            reg = 1
        return cls(
            g_layers={k: tuple(v) for k, v in g_layers.items() if k >= 1},
            f_layers={k: tuple(v) for k, v in f_layers.items() if k >= 1},
            lam=lam,
            reg_max_degree=reg,
            squared_norms=squared_norms,
        )


class KnotObjective:
    """Sum_k ||G_k(z)|| + lam * Sum_{k <= reg} ||F_k(z) - F_k(x)||, batched over z."""

    def __init__(self, spec: KnotObjectiveSpec, registry: PolyRegistry):
        self.spec = spec
        self.registry = registry
        g_polys: list[Polynomial] = []
        self._g_slices: list[slice] = []
        for k in sorted(spec.g_layers):
            polys = spec.g_layers[k]
            if polys:
                self._g_slices.append(slice(len(g_polys), len(g_polys) + len(polys)))
                g_polys.extend(polys)
        f_entries: list[FEntry] = []
        self._f_slices: list[slice] = []
        for k in sorted(spec.f_layers):
            entries = spec.f_layers[k]
            if k <= spec.reg_max_degree and entries:
                self._f_slices.append(slice(len(f_entries), len(f_entries) + len(entries)))
                f_entries.extend(entries)
        self._g = CompiledBatch(g_polys, registry) if g_polys else None
        self._f = CompiledBatch([e.poly for e in f_entries], registry) if f_entries else None
        self._f_scales = np.array([e.scale for e in f_entries], dtype=float)

    @property
    def has_regularizer(self) -> bool:
        return self._f is not None and self.spec.lam > 0

    def anchor_features(self, points) -> np.ndarray:
        """Rescaled F values (regularized degrees only) of the anchor points."""
        evaluator = PolyEvaluator(self.registry, points)
        if self._f is None:
            return np.zeros((evaluator.points.shape[0], 0))
        return self._f.evaluate(evaluator) / self._f_scales

    def _norm(self, block: np.ndarray) -> np.ndarray:
        squared = np.sum(block * block, axis=1)
        return squared if self.spec.squared_norms else np.sqrt(squared)

    def values(self, points, anchor_features: np.ndarray) -> np.ndarray:
        evaluator = PolyEvaluator(self.registry, points)
        total = np.zeros(evaluator.points.shape[0])
        if self._g is not None:
            g_values = self._g.evaluate(evaluator)
            for sl in self._g_slices:
                total += self._norm(g_values[:, sl])
        if self.has_regularizer:
            diff = self._f.evaluate(evaluator) / self._f_scales - anchor_features
            for sl in self._f_slices:
                total += self.spec.lam * self._norm(diff[:, sl])
        return total

    def _norm_jet(self, block: np.ndarray, jac: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        squared = np.sum(block * block, axis=1)
        pulled = np.einsum("nk,nkd->nd", block, jac)
        if self.spec.squared_norms:
            return squared, 2.0 * pulled
        norm = np.sqrt(squared)
        # zero subgradient where the block vanishes
        safe = np.where(norm > 0, norm, 1.0)
        return norm, np.where(norm[:, None] > 0, pulled / safe[:, None], 0.0)

    def values_and_gradients(self, points, anchor_features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Objective values and their analytic gradients with respect to each row of ``points``."""
        evaluator = PolyEvaluator(self.registry, points)
        n, d = evaluator.points.shape
        total = np.zeros(n)
        grad = np.zeros((n, d))
        if self._g is not None:
            g_values, g_jac = self._g.evaluate_jet(evaluator)
            for sl in self._g_slices:
                value, slope = self._norm_jet(g_values[:, sl], g_jac[:, sl])
                total += value
                grad += slope
        if self.has_regularizer:
            f_values, f_jac = self._f.evaluate_jet(evaluator)
            diff = f_values / self._f_scales - anchor_features
            f_jac = f_jac / self._f_scales[None, :, None]
            for sl in self._f_slices:
                value, slope = self._norm_jet(diff[:, sl], f_jac[:, sl])
                total += self.spec.lam * value
                grad += self.spec.lam * slope
        return total, grad


def knot_objective(z, x, spec: KnotObjectiveSpec, registry: PolyRegistry) -> float:
    z = as_point(z, dim=registry.n_vars, name="z")
    x = as_point(x, dim=registry.n_vars, name="x")
    objective = KnotObjective(spec, registry)
    anchor = objective.anchor_features(x[None, :])
    return float(objective.values(z[None, :], anchor)[0])


def knot_objective_gradient(z, x, spec: KnotObjectiveSpec, registry: PolyRegistry) -> np.ndarray:
    z = as_point(z, dim=registry.n_vars, name="z")
    x = as_point(x, dim=registry.n_vars, name="x")
    objective = KnotObjective(spec, registry)
    anchor = objective.anchor_features(x[None, :])
    return objective.values_and_gradients(z[None, :], anchor)[1][0]
