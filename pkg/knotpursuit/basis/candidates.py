from dataclasses import dataclass
from typing import Sequence

import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.polycore import (
    Combination,
    Coordinate,
    Polynomial,
    PolyEvaluator,
    PolyRef,
    PolyRegistry,
    TermLayout,
    combinations_from_block,
    pseudo_inverse,
)
from knotpursuit.polycore.polynomial import RefLayer


def coordinate_candidates(registry: PolyRegistry) -> list[Polynomial]:
    """Degree-1 candidates: the coordinate functions."""
    return list(registry.coordinates)


def generate_candidates(
    f1: Sequence[PolyRef], f_prev: Sequence[PolyRef], registry: PolyRegistry
) -> list[Polynomial]:
    """All products f * g with f in F_1 and g in F_{t-1}.

    An empty result means there is nothing left to climb to.
    """
    if not f1 or not f_prev:
        return []
    for ref in list(f1) + list(f_prev):
        registry.resolve(ref)
    if any(ref.degree != 1 for ref in f1):
        raise InputError("left factors must come from the degree-1 layer")
    degree = 1 + f_prev[0].degree
    layout = TermLayout(pairs=tuple((a, b) for a in f1 for b in f_prev))
    identity = np.eye(len(layout.pairs))
    return combinations_from_block(degree, layout, identity, np.zeros((0, len(layout.pairs))))


@dataclass
class CandidateBlock:
    """Columns of (base, lower) are the coefficient vectors of a polynomial set
    sharing one layout."""

    degree: int
    layout: TermLayout
    base: np.ndarray
    lower: np.ndarray

    @property
    def size(self) -> int:
        return self.base.shape[1]

    def evaluate(self, evaluator: PolyEvaluator) -> np.ndarray:
        n = evaluator.points.shape[0]
        registry = evaluator.registry
        table = evaluator.table(self.layout.max_f_degree)
        out = np.zeros((n, self.size))
        if self.layout.pairs:
            left = [registry.offset(l) for l, _ in self.layout.pairs]
            right = [registry.offset(r) for _, r in self.layout.pairs]
            out += (table[:, left] * table[:, right]) @ self.base
        if self.layout.lower:
            out += table[:, [registry.offset(r) for r in self.layout.lower]] @ self.lower
        return out

    def combine(self, coefs: np.ndarray) -> "CandidateBlock":
        """The block C @ coefs (each column of ``coefs`` is one new polynomial)."""
        return CandidateBlock(self.degree, self.layout, self.base @ coefs, self.lower @ coefs)

    def polynomials(self) -> list[Combination]:
        return combinations_from_block(self.degree, self.layout, self.base, self.lower)


def candidate_block(candidates: Sequence[Polynomial], extra_lower: Sequence[PolyRef] = ()) -> CandidateBlock:
    """Merge candidates into one shared layout whose lower part starts with ``extra_lower``."""
    if not candidates:
        raise InputError("no candidates")
    degree = candidates[0].degree
    pairs: dict[tuple, int] = {}
    lower: dict[PolyRef, int] = {ref: i for i, ref in enumerate(extra_lower)}
    columns: list[tuple[dict[int, float], dict[int, float]]] = []
    for cand in candidates:
        if cand.degree != degree:
            raise InputError("candidates must share one degree")
        base_col: dict[int, float] = {}
        lower_col: dict[int, float] = {}
        if isinstance(cand, Coordinate):
            key = (PolyRef(RefLayer.X, 1, cand.index), None)
            base_col[pairs.setdefault(key, len(pairs))] = 1.0
        elif isinstance(cand, Combination):
            for coef, pair in zip(cand.base_coefs, cand.layout.pairs):
                if coef != 0.0:
                    idx = pairs.setdefault(pair, len(pairs))
                    base_col[idx] = base_col.get(idx, 0.0) + float(coef)
            for coef, ref in zip(cand.lower_coefs, cand.layout.lower):
                if coef != 0.0:
                    idx = lower.setdefault(ref, len(lower))
                    lower_col[idx] = lower_col.get(idx, 0.0) + float(coef)
        else:
            raise InputError(f"{type(cand).__name__} cannot be a candidate")
        columns.append((base_col, lower_col))
    base = np.zeros((len(pairs), len(candidates)))
    low = np.zeros((len(lower), len(candidates)))
    for j, (base_col, lower_col) in enumerate(columns):
        for i, c in base_col.items():
            base[i, j] = c
        for i, c in lower_col.items():
            low[i, j] = c
    layout = TermLayout(pairs=tuple(pairs), lower=tuple(lower))
    return CandidateBlock(degree, layout, base, low)


def residual_block(
    candidates: Sequence[Polynomial],
    f_upto: Sequence[PolyRef],
    z_points,
    registry: PolyRegistry,
    rcond: float = 1e-10,
) -> tuple[CandidateBlock, PolyEvaluator]:
    block = candidate_block(candidates, extra_lower=f_upto)
    evaluator = PolyEvaluator(registry, z_points)
    c_tilde = block.evaluate(evaluator)
    f_z = evaluator.ref_values(list(f_upto))
    projection = pseudo_inverse(f_z, rcond) @ c_tilde
    lower = block.lower.copy()
    lower[: len(f_upto), :] -= projection
    return CandidateBlock(block.degree, block.layout, block.base, lower), evaluator


def residualize(
    candidates: Sequence[Polynomial],
    f_upto: Sequence[PolyRef],
    z_points,
    registry: PolyRegistry,
    rcond: float = 1e-10,
) -> list[Combination]:
    """C_t = C~_t - F^{t-1} (F^{t-1}(Z)^+ C~_t(Z)), one polynomial per candidate."""
    block, _ = residual_block(candidates, f_upto, z_points, registry, rcond)
    return block.polynomials()
