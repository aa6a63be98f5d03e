import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from knotpursuit.polycore import as_point_set
from knotpursuit.settings import settings


def distinct_knots(knots, tol: float | None = None) -> np.ndarray:
    """Merge knots chained within ``tol``; the first member of each cluster stays."""
    tol = settings.knot_merge_tol if tol is None else tol
    z = as_point_set(knots, name="knots")
    if z.shape[0] == 1:
        return z.copy()
    clusters = fcluster(linkage(z, method="single"), t=tol, criterion="distance")
    _, first = np.unique(clusters, return_index=True)
    return z[np.sort(first)]


def knotting_ratio(knots, n_original: int, tol: float | None = None) -> float:
    return distinct_knots(knots, tol).shape[0] / n_original
