from pathlib import Path
from typing import Optional, Union

import numpy as np

from knotpursuit.errors import InputError
from knotpursuit.features.training import ClassFeatureModel
from knotpursuit.polycore import as_point, as_point_set


def extract_feature_matrix(points, model: ClassFeatureModel) -> np.ndarray:
    """|g(x)| for every selected polynomial, classes concatenated in order."""
    dim = model.class_models[0].registry.n_vars
    x = as_point_set(points, dim=dim)
    blocks = []
    for class_model, sel in zip(model.class_models, model.selected):
        if sel:
            blocks.append(np.abs(class_model.evaluate_vanishing(x)[:, list(sel)]))
    if not blocks:
        raise InputError("feature layout is empty")
    return np.hstack(blocks)


def extract_features(x, model: ClassFeatureModel) -> np.ndarray:
    x = as_point(x, dim=model.class_models[0].registry.n_vars, name="x")
    return extract_feature_matrix(x[None, :], model)[0]


def feature_header(model: ClassFeatureModel) -> list[str]:
    return [f"class{i}_g{j}" for i, j in model.layout]


def export_features_csv(
    path: Union[str, Path],
    features: np.ndarray,
    model: ClassFeatureModel,
    labels: Optional[np.ndarray] = None,
) -> Path:
    path = Path(path)
    header = feature_header(model)
    table = np.asarray(features, dtype=float)
    if table.ndim != 2 or table.shape[1] != len(header):
        raise InputError(f"expected {len(header)} feature columns, got shape {table.shape}")
    if labels is not None:
        table = np.column_stack([np.asarray(labels, dtype=float), table])
        header = ["label"] + header
    np.savetxt(path, table, delimiter=",", header=",".join(header), comments="", fmt="%.17g")
    return path
