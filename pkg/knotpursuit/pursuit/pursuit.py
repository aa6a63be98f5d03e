"""Joint search for vanishing polynomials and the data knots they vanish on.

Each degree runs a basis step on the current knots, then alternates knotting
and eta cooling until the new vanishing polynomials are delta-vanishing on the
knots. When no candidates remain and some vanishing polynomial still misses
delta on the knots, the layers are discarded and the search restarts from
degree 1 with the knots and the cooled eta kept.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from knotpursuit.basis import (
    BasisLayerResult,
    VanishingModel,
    coordinate_candidates,
    find_basis,
    generate_candidates,
    vca_fit,
)
from knotpursuit.errors import InputError
from knotpursuit.knotting import KnotObjectiveSpec, KnotReport, knot_all_with_report
from knotpursuit.polycore import Polynomial, PolyRegistry, as_point_set, evaluate_matrix
from knotpursuit.pursuit.config import PursuitConfig
from knotpursuit.pursuit.cooling import cool_eta, max_vanishing_norm
from knotpursuit.pursuit.model import KnotModel, PursuitDiagnostics, TruncationReason

logger = logging.getLogger(__name__)


@dataclass
class PursuitStep:
    layer: BasisLayerResult
    knots: np.ndarray
    eta: float
    eta_trace: list[float] = field(default_factory=list)
    reports: list[KnotReport] = field(default_factory=list)


def _objective_spec(layer: BasisLayerResult, registry: PolyRegistry, cfg: PursuitConfig) -> KnotObjectiveSpec:
    g_layers = dict(registry.g_layers())
    f_layers = dict(registry.f_layers())
    g_layers[layer.degree] = tuple(layer.G)
    f_layers[layer.degree] = tuple(layer.F)
    return KnotObjectiveSpec.from_layers(g_layers, f_layers, cfg.lam, cfg.squared_norms)


def _all_vanish(g_polys: Sequence[Polynomial], points, registry: PolyRegistry, bound: float) -> bool:
    if not g_polys:
        return True
    norms = np.linalg.norm(evaluate_matrix(list(g_polys), registry, points), axis=0)
    return bool(np.all(norms <= bound))


def exact_vanish_pursuit(
    layer: BasisLayerResult,
    candidates: Sequence[Polynomial],
    x0,
    z,
    eta: float,
    cfg: PursuitConfig,
    registry: PolyRegistry,
) -> PursuitStep:
    """Knot, check, cool and recompute the degree-t layer until G_t is
    delta-vanishing on the knots, eta reaches delta or G_t is empty.

    While a sweep still moves some knot by more than ``knot_move_tol`` the
    layer is recomputed at the same eta, up to ``max_sweeps_per_eta`` sweeps;
    eta is cooled once the knots settle.
    """
    x0 = as_point_set(x0, name="X0")
    z = as_point_set(z, name="Z").copy()
    step = PursuitStep(layer=layer, knots=z, eta=eta, eta_trace=[eta])
    f_upto = registry.f_refs_upto(layer.degree - 1)
    bound = cfg.delta + cfg.vanishing_slack
    sweeps = 0
    while step.eta > cfg.delta and step.layer.G:
        spec = _objective_spec(step.layer, registry, cfg)
        report = knot_all_with_report(
            x0, step.knots, spec, registry, cfg.optimizer,
            n_jobs=cfg.n_jobs, anchor_to_source=cfg.anchor_to_source,
        )
        moved = float(np.max(np.linalg.norm(report.knots - step.knots, axis=1)))
        step.knots = report.knots
        step.reports.append(report)
        sweeps += 1
        g_all = registry.vanishing_polynomials() + list(step.layer.G)
        if _all_vanish(g_all, step.knots, registry, bound):
            break
        if moved > cfg.knot_move_tol and sweeps < cfg.max_sweeps_per_eta:
            logger.debug("degree %d: knots moved %.3e, refitting at eta=%.3e", step.layer.degree, moved, step.eta)
            step.layer = find_basis(candidates, f_upto, step.knots, x0, cfg.epsilon, step.eta, registry)
            continue
        sweeps = 0
        step.eta = cool_eta(step.eta, cfg.gamma, g_all, step.knots, registry, cfg.delta, cfg.eta_floor_snap)
        step.eta_trace.append(step.eta)
        logger.debug("degree %d: eta cooled to %.3e", step.layer.degree, step.eta)
        step.layer = find_basis(candidates, f_upto, step.knots, x0, cfg.epsilon, step.eta, registry)
    return step


def fit(points, cfg: Optional[PursuitConfig] = None) -> KnotModel:
    cfg = cfg or PursuitConfig()
    x0 = as_point_set(points, name="X0")
    n, d = x0.shape
    z = x0.copy()
    eta = cfg.epsilon
    diag = PursuitDiagnostics(eta_trace=[eta])

    registry = PolyRegistry(d, n)
    candidates = coordinate_candidates(registry)
    degree = 1
    while True:
        if candidates:
            layer = find_basis(candidates, registry.f_refs_upto(degree - 1), z, x0, cfg.epsilon, eta, registry)
            step = exact_vanish_pursuit(layer, candidates, x0, z, eta, cfg, registry)
            z, eta, layer = step.knots, step.eta, step.layer
            diag.eta_trace.extend(step.eta_trace[1:])
            diag.knot_sweeps += len(step.reports)
            diag.nonfinite_rows += sum(r.n_nonfinite for r in step.reports)
            diag.line_search_failures += sum(r.n_line_search_failures for r in step.reports)
            diag.discarded += layer.diagnostics.n_discarded
            registry.commit_layer(degree, layer.G, layer.F)
            logger.info("degree %d: |G_t|=%d |F_t|=%d eta=%.3e", degree, len(layer.G), len(layer.F), eta)
            if degree >= cfg.max_degree and layer.F:
                diag.truncated = True
                diag.truncation_reason = TruncationReason.MAX_DEGREE
                logger.warning("stopped at the degree cap %d with nonvanishing polynomials left", cfg.max_degree)
                break
            candidates = generate_candidates(registry.f_refs(1), registry.f_refs(degree), registry)
            degree += 1
            continue

        g_polys = registry.vanishing_polynomials()
        if _all_vanish(g_polys, z, registry, cfg.delta + cfg.vanishing_slack):
            break
        # a reset at eta == delta cannot lower eta again, so it is the last one
        settled = bool(diag.reset_etas) and diag.reset_etas[-1] <= cfg.delta
        if diag.resets >= cfg.max_resets or settled:
            diag.truncated = True
            diag.truncation_reason = TruncationReason.MAX_RESETS
            logger.warning("stopped after %d resets without delta-vanishing on the knots", diag.resets)
            break
        eta = cool_eta(eta, cfg.gamma, g_polys, z, registry, cfg.delta, cfg.eta_floor_snap)
        diag.eta_trace.append(eta)
        diag.reset_etas.append(eta)
        diag.resets += 1
        logger.info("reset %d to degree 1, eta=%.3e", diag.resets, eta)
        registry = PolyRegistry(d, z.shape[0])
        candidates = coordinate_candidates(registry)
        degree = 1

    g_polys = registry.vanishing_polynomials()
    diag.max_g_x0 = max_vanishing_norm(g_polys, x0, registry)
    diag.max_g_z = max_vanishing_norm(g_polys, z, registry)
    for k, polys in registry.g_layers().items():
        diag.per_degree_g[k] = len(polys)
    for k, entries in registry.f_layers().items():
        diag.per_degree_f[k] = len(entries)
    logger.info(
        "fit done: |G|=%d resets=%d max||g(X0)||=%.3e max||g(Z)||=%.3e",
        len(g_polys), diag.resets, diag.max_g_x0, diag.max_g_z,
    )
    return KnotModel(
        registry=registry,
        diagnostics={"config": cfg.model_dump(), **diag.model_dump(mode="json")},
        knots=z,
        report=diag,
    )


def knot_basis(model: KnotModel, delta: Optional[float] = None) -> VanishingModel:
    """A VCA basis of the data knots of a fitted model."""
    if model.knots is None:
        raise InputError("model has no data knots")
    if delta is None:
        delta = model.diagnostics.get("config", {}).get("delta", 0.0)
    return vca_fit(model.knots, delta)
