"""BFGS with Armijo backtracking, run on many independent rows at once.

The knot objective uses unsquared norms and is nonsmooth where a vanishing
polynomial crosses zero; a Wolfe line search stalls there, so the step is
accepted on sufficient decrease alone and curvature pairs with s.y <= 0 are
skipped. Every row keeps its own iterate, inverse Hessian and status; one
objective call per line-search round covers all rows still searching.
Gradients are analytic when a ``jac`` is supplied and central differences
otherwise.
"""

import logging
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import OptimizeResult

from knotpursuit.settings import settings

logger = logging.getLogger(__name__)

BatchFunction = Callable[[np.ndarray], np.ndarray]
# (points, row ids) -> one value (or gradient row) per point
RowFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


class OptimizerParams(BaseModel):
    max_iters: int = Field(default_factory=lambda: settings.optimizer_max_iters, ge=0)
    gtol: float = Field(default_factory=lambda: settings.optimizer_gtol, ge=0)
    step_tol: float = Field(default_factory=lambda: settings.optimizer_step_tol, ge=0)
    fd_rel_step: float = Field(default_factory=lambda: settings.fd_rel_step, gt=0)
    analytic_gradient: bool = Field(default_factory=lambda: settings.analytic_gradient)
    armijo_c1: float = Field(default=1e-4, gt=0, lt=1)
    max_backtracks: int = Field(default=50, ge=1)


def central_gradient(fun: BatchFunction, z: np.ndarray, rel_step: float) -> np.ndarray:
    """Central differences with h_j = rel_step * (1 + |z_j|), one batched call."""
    d = z.size
    h = rel_step * (1.0 + np.abs(z))
    steps = np.diag(h)
    values = fun(np.vstack([z + steps, z - steps]))
    return (values[:d] - values[d:]) / (2.0 * h)


def central_row_gradients(fun: RowFunction, z: np.ndarray, rows: np.ndarray, rel_step: float) -> np.ndarray:
    """``central_gradient`` for every row of ``z`` in a single call of ``fun``."""
    m, d = z.shape
    h = rel_step * (1.0 + np.abs(z))
    steps = h[:, :, None] * np.eye(d)[None, :, :]
    plus = (z[:, None, :] + steps).reshape(m * d, d)
    minus = (z[:, None, :] - steps).reshape(m * d, d)
    ids = np.repeat(rows, d)
    values = fun(np.vstack([plus, minus]), np.concatenate([ids, ids]))
    return (values[: m * d] - values[m * d:]).reshape(m, d) / (2.0 * h)


def _initial_inverse_hessians(g: np.ndarray) -> np.ndarray:
    # first trial step has length <= 1
    scale = np.maximum(1.0, np.linalg.norm(g, axis=1))
    return np.eye(g.shape[1])[None, :, :] / scale[:, None, None]


def minimize_bfgs_rows(
    fun: RowFunction,
    z0: np.ndarray,
    params: OptimizerParams,
    jac: Optional[RowFunction] = None,
) -> list[OptimizeResult]:
    """Minimize ``fun(., i)`` from ``z0[i]`` for every row i independently.

    Status codes per row: 0 converged, 1 iteration cap, 2 line search found no
    decrease, 3 non-finite objective or gradient.
    """
    z = np.array(z0, dtype=float, ndmin=2)
    n, d = z.shape
    every = np.arange(n)
    if jac is None:
        def jac(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
            return central_row_gradients(fun, points, rows, params.fd_rel_step)

    f = np.asarray(fun(z, every), dtype=float).copy()
    status = np.ones(n, dtype=int)
    messages = ["maximum iterations reached"] * n
    nit = np.zeros(n, dtype=int)
    nonfinite = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)

    def finish(rows: np.ndarray, code: int, message: str) -> None:
        status[rows] = code
        active[rows] = False
        for i in rows:
            messages[i] = message

    start_bad = every[~np.isfinite(f)]
    nonfinite[start_bad] = True
    finish(start_bad, 3, "non-finite objective at start")

    g = np.zeros((n, d))
    if active.any():
        g[active] = jac(z[active], every[active])
    h_inv = _initial_inverse_hessians(g)
    fresh = np.ones(n, dtype=bool)

    while True:
        active &= nit < params.max_iters
        rows = every[active]
        if rows.size == 0:
            break
        bad = ~np.all(np.isfinite(g[rows]), axis=1)
        nonfinite[rows[bad]] = True
        finish(rows[bad], 3, "non-finite gradient")
        rows = rows[~bad]
        flat = np.max(np.abs(g[rows]), axis=1) <= params.gtol
        finish(rows[flat], 0, "gradient below tolerance")
        rows = rows[~flat]
        if rows.size == 0:
            continue

        p = -np.einsum("nij,nj->ni", h_inv[rows], g[rows])
        slope = np.sum(g[rows] * p, axis=1)
        uphill = slope >= 0
        if uphill.any():
            reset = rows[uphill]
            h_inv[reset] = _initial_inverse_hessians(g[reset])
            fresh[reset] = True
            p[uphill] = -np.einsum("nij,nj->ni", h_inv[reset], g[reset])
            slope[uphill] = np.sum(g[reset] * p[uphill], axis=1)

        alpha = np.ones(rows.size)
        f_new = np.full(rows.size, np.nan)
        accepted = np.zeros(rows.size, dtype=bool)
        pending = np.arange(rows.size)
        for _ in range(params.max_backtracks):
            ids = rows[pending]
            values = np.asarray(fun(z[ids] + alpha[pending, None] * p[pending], ids), dtype=float)
            finite = np.isfinite(values)
            nonfinite[ids[~finite]] = True
            ok = finite & (values < f[ids])
            ok &= values <= f[ids] + params.armijo_c1 * alpha[pending] * slope[pending]
            f_new[pending[ok]] = values[ok]
            accepted[pending[ok]] = True
            pending = pending[~ok]
            if pending.size == 0:
                break
            alpha[pending] *= 0.5

        failed = rows[~accepted]
        finish(failed[fresh[failed]], 2, "line search found no decrease")
        retry = failed[~fresh[failed]]
        h_inv[retry] = _initial_inverse_hessians(g[retry])
        fresh[retry] = True

        moved = rows[accepted]
        if moved.size == 0:
            continue
        s = alpha[accepted, None] * p[accepted]
        z[moved] += s
        f[moved] = f_new[accepted]
        nit[moved] += 1
        tiny = np.linalg.norm(s, axis=1) <= params.step_tol
        finish(moved[tiny], 0, "step below tolerance")
        moved, s = moved[~tiny], s[~tiny]
        if moved.size == 0:
            continue

        g_new = jac(z[moved], moved)
        y = g_new - g[moved]
        sy = np.sum(s * y, axis=1)
        curved = sy > 1e-12 * np.linalg.norm(s, axis=1) * np.linalg.norm(y, axis=1)
        if curved.any():
            sc, yc, upd = s[curved], y[curved], moved[curved]
            rho = 1.0 / sy[curved]
            left = np.eye(d)[None, :, :] - rho[:, None, None] * sc[:, :, None] * yc[:, None, :]
            h_inv[upd] = (
                left @ h_inv[upd] @ left.transpose(0, 2, 1)
                + rho[:, None, None] * sc[:, :, None] * sc[:, None, :]
            )
            fresh[upd] = False
        g[moved] = g_new

    return [
        OptimizeResult(
            x=z[i].copy(),
            fun=float(f[i]),
            nit=int(nit[i]),
            status=int(status[i]),
            success=bool(status[i] in (0, 2)),
            nonfinite=bool(nonfinite[i]),
            message=messages[i],
        )
        for i in range(n)
    ]


def minimize_bfgs(
    fun: BatchFunction,
    z0: np.ndarray,
    params: OptimizerParams,
    jac: Optional[BatchFunction] = None,
) -> OptimizeResult:
    """Single-start BFGS; ``fun`` and ``jac`` take a batch of points."""
    z0 = np.asarray(z0, dtype=float)
    row_jac = None if jac is None else (lambda points, rows: jac(points))
    return minimize_bfgs_rows(lambda points, rows: fun(points), z0[None, :], params, row_jac)[0]
