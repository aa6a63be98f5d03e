from knotpursuit.harness.classifiers import LinearModel, kmeans, knn_predict, predict_linear, train_linear
from knotpursuit.harness.contour import ContourGrid, contour_grid, export_contour_grid, knots_path
from knotpursuit.harness.datasets import LabeledDataset, ScalingRecord, load_builtin, load_csv, load_points
from knotpursuit.harness.experiments import ExperimentConfig, evaluate_linear, run_table1, run_table2
from knotpursuit.harness.generators import GENERATORS, gen_blobs, gen_circle, gen_concentric
from knotpursuit.harness.knots import distinct_knots, knotting_ratio
from knotpursuit.harness.reports import render_report, write_report
from knotpursuit.harness.splits import cross_validate, split_train_test

__all__ = [
    "ContourGrid",
    "ExperimentConfig",
    "GENERATORS",
    "LabeledDataset",
    "LinearModel",
    "ScalingRecord",
    "contour_grid",
    "cross_validate",
    "distinct_knots",
    "evaluate_linear",
    "export_contour_grid",
    "gen_blobs",
    "gen_circle",
    "gen_concentric",
    "kmeans",
    "knn_predict",
    "knots_path",
    "knotting_ratio",
    "load_builtin",
    "load_csv",
    "load_points",
    "predict_linear",
    "render_report",
    "run_table1",
    "run_table2",
    "split_train_test",
    "train_linear",
    "write_report",
]
