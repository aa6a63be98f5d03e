from typing import Mapping, Optional, Sequence

import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.polycore import FEntry, PolyRegistry, as_point, evaluate_f_entries


def generalized_distance(
    x,
    y,
    registry: PolyRegistry,
    f_layers: Optional[Mapping[int, Sequence[FEntry]]] = None,
    max_degree: Optional[int] = None,
) -> float:
    """||F(x) - F(y)|| over the rescaled nonvanishing layers of degree >= 1.

    With only the degree-1 layer this is the Mahalanobis distance under the
    principal part of the data covariance.
    """
    x = as_point(x, dim=registry.n_vars, name="x")
    y = as_point(y, dim=registry.n_vars, name="y")
    layers = registry.f_layers() if f_layers is None else f_layers
    entries: list[FEntry] = []
    for k in sorted(layers):
        if k < 1 or (max_degree is not None and k > max_degree):
            continue
        entries.extend(layers[k])
    if not entries:
        return 0.0
    fx = evaluate_f_entries(entries, registry, x[None, :])[0]
    fy = evaluate_f_entries(entries, registry, y[None, :])[0]
    if not (np.all(np.isfinite(fx)) and np.all(np.isfinite(fy))):
        raise InputError("non-finite feature values")
    return float(np.linalg.norm(fx - fy))
