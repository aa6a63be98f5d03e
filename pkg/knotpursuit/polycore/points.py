import numpy as np

from knotpursuit.errors import InputError

# A point set is an N x d float matrix, one point per row.
PointSet = np.ndarray


def as_point_set(data, dim: int | None = None, name: str = "points") -> PointSet:
    points = np.asarray(data, dtype=float)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.ndim != 2:
        raise InputError(f"{name} must be a 2-d array, got shape {points.shape}")
    if points.shape[0] < 1 or points.shape[1] < 1:
        raise InputError(f"{name} must contain at least one point and one coordinate")
    if dim is not None and points.shape[1] != dim:
        raise InputError(f"{name} has dimension {points.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(points)):
        raise InputError(f"{name} contains non-finite entries")
    return points


def as_point(data, dim: int | None = None, name: str = "point") -> np.ndarray:
    point = np.asarray(data, dtype=float)
    if point.ndim != 1:
        raise InputError(f"{name} must be a 1-d vector, got shape {point.shape}")
    if dim is not None and point.shape[0] != dim:
        raise InputError(f"{name} has dimension {point.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(point)):
        raise InputError(f"{name} contains non-finite entries")
    return point
