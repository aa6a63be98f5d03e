from .points import PointSet, as_point_set, as_point
from .polynomial import (
    BaseTerm,
    Combination,
    Constant,
    Coordinate,
    LowerTerm,
    Polynomial,
    PolyKind,
    PolyRef,
    RefLayer,
    TermLayout,
    combinations_from_block,
)
from .evaluation import (
    CompiledBatch,
    PolyEvaluator,
    evaluate,
    evaluate_f_entries,
    evaluate_matrix,
)
from .registry import FEntry, PolyRegistry
from .spectral import SpectralSplit, pseudo_inverse, spectral_split
from .oracle import evaluate_monomials, expand_to_monomials

__all__ = [
    "PointSet", "as_point_set", "as_point",
    "BaseTerm", "Combination", "Constant", "Coordinate", "LowerTerm",
    "Polynomial", "PolyKind", "PolyRef", "RefLayer", "TermLayout",
    "combinations_from_block",
    "CompiledBatch", "PolyEvaluator", "evaluate", "evaluate_f_entries", "evaluate_matrix",
    "FEntry", "PolyRegistry",
    "SpectralSplit", "pseudo_inverse", "spectral_split",
    "evaluate_monomials", "expand_to_monomials",
]
