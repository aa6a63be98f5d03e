import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.polycore import as_point_set, spectral_split


def linear_knots(points, epsilon: float) -> np.ndarray:
    """Closed-form degree-1 knots: project the centred data onto the singular
    directions whose singular value exceeds ``epsilon``."""
    if epsilon < 0:
        raise InputError(f"epsilon must be >= 0, got {epsilon}")
    x = as_point_set(points)
    mean = x.mean(axis=0)
    centred = x - mean
    split = spectral_split(centred, epsilon)
    basis = split.right_above
    return mean + centred @ basis @ basis.T
