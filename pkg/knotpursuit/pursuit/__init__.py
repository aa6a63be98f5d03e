from knotpursuit.pursuit.config import PursuitConfig
from knotpursuit.pursuit.cooling import cool_eta, max_vanishing_norm
from knotpursuit.pursuit.model import KnotModel, PursuitDiagnostics, TruncationReason
from knotpursuit.pursuit.pursuit import PursuitStep, exact_vanish_pursuit, fit, knot_basis

__all__ = [
    "KnotModel",
    "PursuitConfig",
    "PursuitDiagnostics",
    "PursuitStep",
    "TruncationReason",
    "cool_eta",
    "exact_vanish_pursuit",
    "fit",
    "knot_basis",
    "max_vanishing_norm",
]
