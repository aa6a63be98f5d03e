import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from knotpursuit.basis.candidates import CandidateBlock, residual_block
from knotpursuit.errors import InputError
from knotpursuit.polycore import (
    Combination,
    FEntry,
    Polynomial,
    PolyEvaluator,
    PolyRef,
    PolyRegistry,
    as_point_set,
    spectral_split,
)
from knotpursuit.settings import settings

logger = logging.getLogger(__name__)


@dataclass
class BasisDiagnostics:
    sigma_x0: list[float] = field(default_factory=list)
    sigma_z_vanishing: list[float] = field(default_factory=list)
    sigma_z_nonvanishing: list[float] = field(default_factory=list)
    n_discarded: int = 0
    n_capped: int = 0
    g_norms_x0: list[float] = field(default_factory=list)
    g_norms_z: list[float] = field(default_factory=list)


@dataclass
class BasisLayerResult:
    degree: int
    G: list[Combination]
    F: list[FEntry]
    diagnostics: BasisDiagnostics

    @classmethod
    def empty(cls, degree: int) -> "BasisLayerResult":
        return cls(degree, [], [], BasisDiagnostics())


def _threshold(tol: float, matrix: np.ndarray, rank_tol: float) -> float:
    """``tol`` itself when positive, else the numerical rank floor of ``matrix``.

    A positive tolerance is never raised, so a split at delta leaves every
    singular value above delta on the nonvanishing side.
    """
    if tol > 0 or matrix.size == 0:
        return tol
    return rank_tol * max(1.0, float(np.linalg.norm(matrix, 2)))


def _independent_columns(values: np.ndarray, limit: int, tol: float) -> np.ndarray:
    """Positions, in original order, of at most ``limit`` columns of ``values``
    chosen by column-pivoted QR, each keeping a residual norm above ``tol``."""
    if limit <= 0 or values.shape[1] == 0:
        return np.zeros(0, dtype=int)
    _, r, pivots = scipy.linalg.qr(values, mode="economic", pivoting=True)
    rank = int(np.sum(np.abs(np.diag(r)) > tol))
    return np.sort(pivots[: min(rank, limit)])


def find_basis(
    candidates: Sequence[Polynomial],
    f_upto: Sequence[PolyRef],
    z_points,
    x0_points,
    epsilon: float,
    eta: float,
    registry: PolyRegistry,
    rank_tol: float | None = None,
    rcond: float | None = None,
) -> BasisLayerResult:
    """Split the residual candidates into vanishing G_t and nonvanishing F_t.

    G_t is eps-vanishing on X0 and eta-vanishing on Z; F_t is eta-nonvanishing
    on Z and each member is rescaled by its evaluation norm on Z. Polynomials
    that are eps-nonvanishing on X0 but eta-vanishing on Z are dropped.
    """
    rank_tol = settings.svd_rank_tol if rank_tol is None else rank_tol
    rcond = settings.pinv_rcond if rcond is None else rcond
    z = as_point_set(z_points, name="Z")
    x0 = as_point_set(x0_points, name="X0")
    if z.shape[1] != x0.shape[1] or z.shape[1] != registry.n_vars:
        raise InputError(f"dimension mismatch: Z has {z.shape[1]}, X0 has {x0.shape[1]}")
    if not candidates:
        return BasisLayerResult.empty(0)
    degree = candidates[0].degree

    block, z_eval = residual_block(candidates, f_upto, z, registry, rcond)
    c_x0 = block.evaluate(PolyEvaluator(registry, x0))
    c_z = block.evaluate(z_eval)

    split0 = spectral_split(c_x0, _threshold(epsilon, c_x0, rank_tol))
    v0_above, v0_below = split0.right_above, split0.right_below

    cz_below = c_z @ v0_below
    split_v = spectral_split(cz_below, _threshold(eta, cz_below, rank_tol))
    cz_above = c_z @ v0_above
    split_w = spectral_split(cz_above, _threshold(eta, cz_above, rank_tol))

    g_coefs = v0_below @ split_v.right_below
    f_coefs = np.hstack([v0_above @ split_w.right_above, v0_below @ split_v.right_above])

    # |F| never exceeds |Z|: keep independent columns within the remaining budget
    budget = max(0, z.shape[0] - len(f_upto))
    f_z = c_z @ f_coefs
    keep = _independent_columns(f_z, budget, _threshold(eta, f_z, rank_tol))
    n_capped = f_coefs.shape[1] - keep.size
    f_coefs = f_coefs[:, keep]
    if n_capped:
        logger.debug("find_basis degree %d: %d nonvanishing directions over the budget of %d", degree, n_capped, budget)

    g_block: CandidateBlock = block.combine(g_coefs)
    f_block: CandidateBlock = block.combine(f_coefs)
    f_scales = np.linalg.norm(c_z @ f_coefs, axis=0)

    diagnostics = BasisDiagnostics(
        sigma_x0=split0.singular_values.tolist(),
        sigma_z_vanishing=split_v.singular_values.tolist(),
        sigma_z_nonvanishing=split_w.singular_values.tolist(),
        n_discarded=split_w.n_below + n_capped,
        n_capped=n_capped,
        g_norms_x0=np.linalg.norm(c_x0 @ g_coefs, axis=0).tolist(),
        g_norms_z=np.linalg.norm(c_z @ g_coefs, axis=0).tolist(),
    )
    result = BasisLayerResult(
        degree=degree,
        G=g_block.polynomials(),
        F=[FEntry(poly, float(scale)) for poly, scale in zip(f_block.polynomials(), f_scales)],
        diagnostics=diagnostics,
    )
    logger.debug(
        "find_basis degree %d: %d candidates -> |G|=%d |F|=%d (discarded %d, eps=%g, eta=%g)",
        degree, block.size, len(result.G), len(result.F), diagnostics.n_discarded, epsilon, eta,
    )
    return result
