"""Evaluation of registry polynomials on point sets.

Every polynomial is evaluated through a column table
``[1 | X | F_0(P) | F_1(P) | ...]`` built degree by degree, so a reference to
a stored layer entry costs one column lookup. Polynomials sharing a
``TermLayout`` are evaluated together with one matrix product. Gradients with
respect to the point follow the same table through the product rule.
"""

from dataclasses import dataclass, field
from typing import Sequence, TYPE_CHECKING

import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.polycore.points import as_point, as_point_set
from knotpursuit.polycore.polynomial import (
    Combination,
    Constant,
    Coordinate,
    Polynomial,
    PolyRef,
    RefLayer,
)

if TYPE_CHECKING:
    from knotpursuit.polycore.registry import PolyRegistry


@dataclass
class _LayoutGroup:
    columns: np.ndarray
    left: np.ndarray
    right: np.ndarray
    lower: np.ndarray
    base: np.ndarray  # n_pairs x n_polys
    lower_coefs: np.ndarray  # n_lower x n_polys


@dataclass
class CompiledBatch:
    """An ordered list of polynomials prepared for repeated evaluation."""

    polys: Sequence[Polynomial]
    registry: "PolyRegistry"
    size: int = field(init=False)
    need_degree: int = field(init=False)

    def __post_init__(self):
        self.size = len(self.polys)
        self._constants: list[tuple[int, float]] = []
        self._coordinates: list[tuple[int, int]] = []
        self._groups: list[_LayoutGroup] = []
        need = 0
        grouped: dict[int, list[int]] = {}
        layouts = {}
        for col, poly in enumerate(self.polys):
            if isinstance(poly, Constant):
                self._constants.append((col, poly.value))
            elif isinstance(poly, Coordinate):
                self.registry.resolve(PolyRef.coordinate(poly.index))
                self._coordinates.append((col, poly.index))
            elif isinstance(poly, Combination):
                grouped.setdefault(id(poly.layout), []).append(col)
                layouts[id(poly.layout)] = poly.layout
            else:
                raise InputError(f"cannot evaluate {type(poly).__name__}")
        for key, cols in grouped.items():
            layout = layouts[key]
            need = max(need, layout.max_f_degree)
            offset = self.registry.offset
            self._groups.append(
                _LayoutGroup(
                    columns=np.array(cols, dtype=int),
                    left=np.array([offset(l) for l, _ in layout.pairs], dtype=int),
                    right=np.array([offset(r) for _, r in layout.pairs], dtype=int),
                    lower=np.array([offset(ref) for ref in layout.lower], dtype=int),
                    base=np.column_stack([self.polys[c].base_coefs for c in cols])
                    if layout.pairs
                    else np.zeros((0, len(cols))),
                    lower_coefs=np.column_stack([self.polys[c].lower_coefs for c in cols])
                    if layout.lower
                    else np.zeros((0, len(cols))),
                )
            )
        self.need_degree = need

    def evaluate(self, evaluator: "PolyEvaluator") -> np.ndarray:
        n = evaluator.points.shape[0]
        out = np.zeros((n, self.size))
        for col, value in self._constants:
            out[:, col] = value
        for col, index in self._coordinates:
            out[:, col] = evaluator.points[:, index]
        if self._groups:
            table = evaluator.table(self.need_degree)
            for group in self._groups:
                values = np.zeros((n, group.columns.size))
                if group.left.size:
                    values += (table[:, group.left] * table[:, group.right]) @ group.base
                if group.lower.size:
                    values += table[:, group.lower] @ group.lower_coefs
                out[:, group.columns] = values
        return out

    def evaluate_jet(self, evaluator: "PolyEvaluator") -> tuple[np.ndarray, np.ndarray]:
        """Values (n x m) and gradients (n x m x d) with respect to the point."""
        n, d = evaluator.points.shape
        out = np.zeros((n, self.size))
        grad = np.zeros((n, self.size, d))
        for col, value in self._constants:
            out[:, col] = value
        for col, index in self._coordinates:
            out[:, col] = evaluator.points[:, index]
            grad[:, col, index] = 1.0
        if self._groups:
            table, dtable = evaluator.jet_table(self.need_degree)
            for group in self._groups:
                values = np.zeros((n, group.columns.size))
                dvalues = np.zeros((n, group.columns.size, d))
                if group.left.size:
                    left, right = table[:, group.left], table[:, group.right]
                    values += (left * right) @ group.base
                    dprod = dtable[:, group.left] * right[:, :, None] + left[:, :, None] * dtable[:, group.right]
                    dvalues += np.einsum("npd,pm->nmd", dprod, group.base)
                if group.lower.size:
                    values += table[:, group.lower] @ group.lower_coefs
                    dvalues += np.einsum("nld,lm->nmd", dtable[:, group.lower], group.lower_coefs)
                out[:, group.columns] = values
                grad[:, group.columns] = dvalues
        return out, grad


class PolyEvaluator:
    """Caches rescaled F-layer values of one registry on one point set."""

    def __init__(self, registry: "PolyRegistry", points):
        self.registry = registry
        self.points = as_point_set(points, dim=registry.n_vars)
        n = self.points.shape[0]
        self._blocks: list[np.ndarray] = [np.ones((n, 1)), self.points]
        self._built = -1
        self._tables: dict[int, np.ndarray] = {}
        d = self.points.shape[1]
        self._dblocks: list[np.ndarray] = [np.zeros((n, 1, d)), np.broadcast_to(np.eye(d), (n, d, d))]
        self._dbuilt = -1
        self._dtables: dict[int, np.ndarray] = {}

    def f_layer_values(self, degree: int) -> np.ndarray:
        self.table(degree)
        return self._blocks[2 + degree]

    def table(self, degree: int) -> np.ndarray:
        degree = min(degree, self.registry.max_degree)
        while self._built < degree:
            k = self._built + 1
            batch = self.registry.compiled_f_layer(k)
            raw = batch.evaluate(self) if batch.size else np.zeros((self.points.shape[0], 0))
            self._blocks.append(raw / self.registry.f_scales(k))
            self._built = k
        cached = self._tables.get(degree)
        if cached is None:
            cached = np.hstack(self._blocks[: 3 + degree])
            self._tables[degree] = cached
        return cached

    def jet_table(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        """The evaluation table and its gradient (n x width x d)."""
        degree = min(degree, self.registry.max_degree)
        table = self.table(degree)
        n, d = self.points.shape
        while self._dbuilt < degree:
            k = self._dbuilt + 1
            batch = self.registry.compiled_f_layer(k)
            if batch.size:
                _, draw = batch.evaluate_jet(self)
            else:
                draw = np.zeros((n, 0, d))
            self._dblocks.append(draw / self.registry.f_scales(k)[None, :, None])
            self._dbuilt = k
        cached = self._dtables.get(degree)
        if cached is None:
            cached = np.concatenate(self._dblocks[: 3 + degree], axis=1)
            self._dtables[degree] = cached
        return table, cached

    def ref_values(self, refs: Sequence[PolyRef]) -> np.ndarray:
        if not refs:
            return np.zeros((self.points.shape[0], 0))
        degree = max(ref.degree if ref.layer == RefLayer.F else 0 for ref in refs)
        table = self.table(degree)
        return table[:, [self.registry.offset(ref) for ref in refs]]

    def evaluate(self, polys) -> np.ndarray:
        batch = polys if isinstance(polys, CompiledBatch) else CompiledBatch(list(polys), self.registry)
        return batch.evaluate(self)


def evaluate_matrix(polys: Sequence[Polynomial], registry: "PolyRegistry", points) -> np.ndarray:
    """N x |polys| evaluation matrix; column j is the evaluation vector of polys[j]."""
    if len(polys) == 0:
        raise InputError("evaluate_matrix needs at least one polynomial")
    return PolyEvaluator(registry, points).evaluate(polys)


def evaluate(poly: Polynomial, registry: "PolyRegistry", point) -> float:
    point = as_point(point, dim=registry.n_vars)
    return float(evaluate_matrix([poly], registry, point[None, :])[0, 0])


def evaluate_f_entries(entries, registry: "PolyRegistry", points) -> np.ndarray:
    """Rescaled evaluations of F-layer entries (each divided by its stored scale)."""
    if not entries:
        return np.zeros((as_point_set(points).shape[0], 0))
    values = evaluate_matrix([e.poly for e in entries], registry, points)
    return values / np.array([e.scale for e in entries], dtype=float)
