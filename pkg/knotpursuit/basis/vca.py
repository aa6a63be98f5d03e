import logging
from typing import Optional

from knotpursuit.basis.candidates import coordinate_candidates, generate_candidates
from knotpursuit.basis.find_basis import find_basis
from knotpursuit.basis.model import VanishingModel
from knotpursuit.errors import InputError
from knotpursuit.polycore import PolyRegistry, as_point_set
from knotpursuit.settings import settings

logger = logging.getLogger(__name__)


def vca_fit(points, epsilon: float, max_degree: Optional[int] = None) -> VanishingModel:
    """Vanishing Component Analysis: find_basis with Z = X and eta = eps at every degree."""
    if epsilon < 0:
        raise InputError(f"epsilon must be >= 0, got {epsilon}")
    x = as_point_set(points)
    max_degree = settings.max_degree if max_degree is None else max_degree
    registry = PolyRegistry(x.shape[1], x.shape[0])
    candidates = coordinate_candidates(registry)
    degree = 1
    truncated = False
    discarded = 0
    while candidates:
        layer = find_basis(candidates, registry.f_refs_upto(degree - 1), x, x, epsilon, epsilon, registry)
        registry.commit_layer(degree, layer.G, layer.F)
        discarded += layer.diagnostics.n_discarded
        logger.debug("vca degree %d: |G|=%d |F|=%d", degree, len(layer.G), len(layer.F))
        if degree >= max_degree:
            truncated = bool(layer.F)
            break
        candidates = generate_candidates(registry.f_refs(1), registry.f_refs(degree), registry)
        degree += 1
    if truncated:
        logger.warning("vca stopped at the degree cap %d with nonvanishing candidates left", max_degree)
    diagnostics = {
        "epsilon": epsilon,
        "max_degree_reached": registry.max_degree,
        "truncated": truncated,
        "n_discarded": discarded,
    }
    return VanishingModel(registry=registry, method="vca", diagnostics=diagnostics)
