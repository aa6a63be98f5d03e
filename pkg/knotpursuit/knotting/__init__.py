from knotpursuit.knotting.distance import generalized_distance
from knotpursuit.knotting.knots import KnotReport, knot_all, knot_all_with_report, knot_point
from knotpursuit.knotting.linear import linear_knots
from knotpursuit.knotting.objective import (
    KnotObjective,
    KnotObjectiveSpec,
    knot_objective,
    knot_objective_gradient,
)
from knotpursuit.knotting.optimizer import (
    OptimizerParams,
    central_gradient,
    central_row_gradients,
    minimize_bfgs,
    minimize_bfgs_rows,
)

__all__ = [
    "KnotObjective",
    "KnotObjectiveSpec",
    "KnotReport",
    "OptimizerParams",
    "central_gradient",
    "central_row_gradients",
    "generalized_distance",
    "knot_all",
    "knot_all_with_report",
    "knot_objective",
    "knot_objective_gradient",
    "knot_point",
    "linear_knots",
    "minimize_bfgs",
    "minimize_bfgs_rows",
]
