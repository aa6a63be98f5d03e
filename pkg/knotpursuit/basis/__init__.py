from .candidates import (
    CandidateBlock,
    candidate_block,
    coordinate_candidates,
    generate_candidates,
    residual_block,
    residualize,
)
from .find_basis import BasisDiagnostics, BasisLayerResult, find_basis
from .model import VanishingModel
from .vca import vca_fit

__all__ = [
    "CandidateBlock", "candidate_block", "coordinate_candidates", "generate_candidates",
    "residual_block", "residualize",
    "BasisDiagnostics", "BasisLayerResult", "find_basis",
    "VanishingModel", "vca_fit",
]
