import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from knotpursuit.errors import InputError, StructureError
from knotpursuit.polycore.evaluation import CompiledBatch
from knotpursuit.polycore.polynomial import (
    Combination,
    Constant,
    Coordinate,
    Polynomial,
    PolyRef,
    RefLayer,
)


@dataclass(frozen=True)
class FEntry:
    """A nonvanishing polynomial together with its rescaling divisor."""

    poly: Polynomial
    scale: float


class PolyRegistry:
    """Per-degree F (nonvanishing) and G (vanishing) layers of one pursuit epoch.

    Layers are append-only: degree t may only be committed after degree t-1,
    and committed layers are never modified. A reset builds a new registry.
    """

    def __init__(self, n_vars: int, n_points: int):
        if n_vars < 1 or n_points < 1:
            raise InputError("registry needs at least one variable and one point")
        self.n_vars = n_vars
        self.n_points = n_points
        self.coordinates = tuple(Coordinate(degree=1, index=j) for j in range(n_vars))
        constant = Constant(degree=0, value=1.0 / math.sqrt(n_points))
        self._f_layers: dict[int, tuple[FEntry, ...]] = {0: (FEntry(constant, 1.0),)}
        self._g_layers: dict[int, tuple[Polynomial, ...]] = {0: ()}
        self._offsets: dict[int, int] = {0: 1 + n_vars}
        self._compiled: dict[int, CompiledBatch] = {}
        self._lock = threading.Lock()

    @property
    def max_degree(self) -> int:
        return max(self._f_layers)

    def f_layer(self, degree: int) -> tuple[FEntry, ...]:
        return self._f_layers.get(degree, ())

    def g_layer(self, degree: int) -> tuple[Polynomial, ...]:
        return self._g_layers.get(degree, ())

    def f_refs(self, degree: int) -> list[PolyRef]:
        return [PolyRef.f(degree, p) for p in range(len(self.f_layer(degree)))]

    def f_refs_upto(self, degree: int) -> list[PolyRef]:
        refs: list[PolyRef] = []
        for k in range(min(degree, self.max_degree) + 1):
            refs.extend(self.f_refs(k))
        return refs

    def g_layers(self) -> dict[int, tuple[Polynomial, ...]]:
        return {k: v for k, v in self._g_layers.items() if k > 0}

    def f_layers(self) -> dict[int, tuple[FEntry, ...]]:
        return dict(self._f_layers)

    def vanishing_polynomials(self) -> list[Polynomial]:
        polys: list[Polynomial] = []
        for k in sorted(self._g_layers):
            polys.extend(self._g_layers[k])
        return polys

    def nonvanishing_entries(self) -> list[FEntry]:
        entries: list[FEntry] = []
        for k in sorted(self._f_layers):
            entries.extend(self._f_layers[k])
        return entries

    def commit_layer(
        self, degree: int, g_polys: list[Polynomial], f_entries: list[FEntry]
    ) -> None:
        if degree != self.max_degree + 1:
            raise StructureError(
                f"layer {degree} cannot be committed after layer {self.max_degree}"
            )
        for poly in list(g_polys) + [e.poly for e in f_entries]:
            if poly.degree != degree:
                raise StructureError(
                    f"polynomial of degree {poly.degree} in layer {degree}"
                )
            self.check_refs(poly)
        with self._lock:
            prev = degree - 1
            self._offsets[degree] = self._offsets[prev] + len(self._f_layers[prev])
            self._f_layers[degree] = tuple(f_entries)
            self._g_layers[degree] = tuple(g_polys)

    def resolve(self, ref: PolyRef) -> tuple[Polynomial, float]:
        if ref.layer == RefLayer.X:
            if ref.degree != 1 or not 0 <= ref.position < self.n_vars:
                raise StructureError(f"dangling coordinate reference {ref}")
            return self.coordinates[ref.position], 1.0
        layer = self._f_layers.get(ref.degree)
        if layer is None or not 0 <= ref.position < len(layer):
            raise StructureError(f"dangling reference {ref}")
        entry = layer[ref.position]
        return entry.poly, entry.scale

    def offset(self, ref: Optional[PolyRef]) -> int:
        """Column of ``ref`` in an evaluation table [1 | X | F_0 | F_1 | ...]."""
        if ref is None:
            return 0
        self.resolve(ref)
        if ref.layer == RefLayer.X:
            return 1 + ref.position
        return self._offsets[ref.degree] + ref.position

    def table_width(self, degree: int) -> int:
        degree = min(degree, self.max_degree)
        return self._offsets[degree] + len(self._f_layers[degree])

    def check_refs(self, poly: Polynomial) -> None:
        if isinstance(poly, Coordinate):
            if not 0 <= poly.index < self.n_vars:
                raise StructureError(f"coordinate {poly.index} out of range")
            return
        if not isinstance(poly, Combination):
            return
        for left, right in poly.layout.pairs:
            self.resolve(left)
            right_degree = 0
            if right is not None:
                self.resolve(right)
                right_degree = right.degree
            if left.degree + right_degree != poly.degree:
                raise StructureError(
                    f"product of degrees {left.degree}+{right_degree} in a degree-{poly.degree} polynomial"
                )
        for ref in poly.layout.lower:
            self.resolve(ref)
            if ref.degree >= poly.degree:
                raise StructureError(f"lower term {ref} is not of lower degree")

    def compiled_f_layer(self, degree: int) -> CompiledBatch:
        with self._lock:
            batch = self._compiled.get(degree)
            if batch is None:
                batch = CompiledBatch([e.poly for e in self.f_layer(degree)], self)
                self._compiled[degree] = batch
            return batch

    def f_scales(self, degree: int) -> np.ndarray:
        return np.array([e.scale for e in self.f_layer(degree)], dtype=float)
