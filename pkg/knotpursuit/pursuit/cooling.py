from typing import Optional, Sequence

import numpy as np

from knotpursuit.polycore import Polynomial, PolyRegistry, evaluate_matrix
from knotpursuit.settings import settings


def max_vanishing_norm(g_polys: Sequence[Polynomial], points, registry: PolyRegistry) -> float:
    if not g_polys:
        return 0.0
    return float(np.max(np.linalg.norm(evaluate_matrix(list(g_polys), registry, points), axis=0)))


def cool_eta(
    eta: float,
    gamma: float,
    g_polys: Sequence[Polynomial],
    z_points,
    registry: PolyRegistry,
    delta: float = 0.0,
    snap: Optional[float] = None,
) -> float:
    """min(gamma * eta, max_g ||g(Z)||), never below delta."""
    snap = settings.eta_floor_snap if snap is None else snap
    cooled = gamma * eta
    if g_polys:
        cooled = min(cooled, max_vanishing_norm(g_polys, z_points, registry))
    if cooled - delta < snap:
        cooled = delta
    return cooled
