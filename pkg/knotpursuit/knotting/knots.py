import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.knotting.objective import KnotObjective, KnotObjectiveSpec
from knotpursuit.knotting.optimizer import OptimizerParams, minimize_bfgs_rows
from knotpursuit.polycore import PolyRegistry, as_point, as_point_set
from knotpursuit.settings import settings

logger = logging.getLogger(__name__)


@dataclass
class KnotReport:
    """Per-row outcome of one knotting sweep."""

    knots: np.ndarray
    objective_before: np.ndarray
    objective_after: np.ndarray
    iterations: np.ndarray
    nonfinite: np.ndarray
    line_search_failures: np.ndarray
    messages: list[str] = field(default_factory=list)

    @property
    def n_nonfinite(self) -> int:
        return int(self.nonfinite.sum())

    @property
    def n_line_search_failures(self) -> int:
        return int(self.line_search_failures.sum())


def _solve_rows(objective: KnotObjective, anchors: np.ndarray, z_init: np.ndarray, opt: OptimizerParams):
    def fun(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return objective.values(points, anchors[rows])

    def jac(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return objective.values_and_gradients(points, anchors[rows])[1]

    return minimize_bfgs_rows(fun, z_init, opt, jac if opt.analytic_gradient else None)


def knot_point(
    x,
    z_init,
    spec: KnotObjectiveSpec,
    registry: PolyRegistry,
    opt: Optional[OptimizerParams] = None,
) -> np.ndarray:
    """Move ``z_init`` to lower the knot objective anchored at ``x``.

    The returned point never has a higher objective than ``z_init``.
    """
    opt = opt or OptimizerParams()
    x = as_point(x, dim=registry.n_vars, name="x")
    z_init = as_point(z_init, dim=registry.n_vars, name="z_init")
    objective = KnotObjective(spec, registry)
    anchor = objective.anchor_features(x[None, :])
    result = _solve_rows(objective, anchor, z_init[None, :], opt)[0]
    if result.nonfinite:
        logger.warning("knot_point: non-finite objective encountered, kept best iterate")
    return np.asarray(result.x, dtype=float)


def knot_all_with_report(
    X,
    Z_current,
    spec: KnotObjectiveSpec,
    registry: PolyRegistry,
    opt: Optional[OptimizerParams] = None,
    n_jobs: Optional[int] = None,
    anchor_to_source: Optional[bool] = None,
) -> KnotReport:
    opt = opt or OptimizerParams()
    n_jobs = settings.n_jobs if n_jobs is None else n_jobs
    anchor_to_source = settings.anchor_to_source if anchor_to_source is None else anchor_to_source
    x = as_point_set(X, dim=registry.n_vars, name="X")
    z = as_point_set(Z_current, dim=registry.n_vars, name="Z")
    if x.shape != z.shape:
        raise InputError(f"X has shape {x.shape} but Z has shape {z.shape}")

    objective = KnotObjective(spec, registry)
    anchors = objective.anchor_features(x if anchor_to_source else z)
    before = objective.values(z, anchors)

    def solve(rows: np.ndarray):
        return _solve_rows(objective, anchors[rows], z[rows], opt)

    if n_jobs > 1 and z.shape[0] > 1:
        chunks = [rows for rows in np.array_split(np.arange(z.shape[0]), n_jobs) if rows.size]
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = [r for part in pool.map(solve, chunks) for r in part]
    else:
        results = solve(np.arange(z.shape[0]))

    report = KnotReport(
        knots=np.vstack([r.x for r in results]),
        objective_before=before,
        objective_after=np.array([r.fun for r in results]),
        iterations=np.array([r.nit for r in results], dtype=int),
        nonfinite=np.array([bool(r.nonfinite) for r in results]),
        line_search_failures=np.array([r.status == 2 for r in results]),
        messages=[r.message for r in results],
    )
    if report.n_nonfinite:
        logger.warning("knot_all: %d rows hit a non-finite objective", report.n_nonfinite)
    logger.debug(
        "knot_all: %d rows, objective %.3e -> %.3e",
        z.shape[0], float(before.sum()), float(report.objective_after.sum()),
    )
    return report


def knot_all(
    X,
    Z_current,
    spec: KnotObjectiveSpec,
    registry: PolyRegistry,
    opt: Optional[OptimizerParams] = None,
    n_jobs: Optional[int] = None,
    anchor_to_source: Optional[bool] = None,
) -> np.ndarray:
    """Knot every row of ``Z_current`` independently; row i is anchored at X[i]."""
    return knot_all_with_report(X, Z_current, spec, registry, opt, n_jobs, anchor_to_source).knots
