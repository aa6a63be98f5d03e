from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import KMeans
from sklearn.linear_model import LogisticRegression
from sklearn.multiclass import OneVsRestClassifier
from sklearn.pipeline import Pipeline, make_pipeline
from sklearn.preprocessing import StandardScaler

from knotpursuit.errors import InputError
from knotpursuit.polycore import as_point_set
from knotpursuit.settings import settings


@dataclass(frozen=True)
class LinearModel:
    """One-vs-rest logistic regression standing in for a linear SVM."""

    pipeline: Pipeline
    classes: np.ndarray


def train_linear(features, labels, reg: float | None = None) -> LinearModel:
    reg = settings.linear_reg if reg is None else reg
    if reg <= 0:
        raise InputError(f"regularization must be > 0, got {reg}")
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=int)
    if x.ndim != 2 or x.shape[0] != y.size:
        raise InputError(f"features of shape {x.shape} do not match {y.size} labels")
    classes = np.unique(y)
    if classes.size < 2:
        raise InputError("a linear classifier needs at least two classes")
    pipeline = make_pipeline(
        StandardScaler(),
        OneVsRestClassifier(LogisticRegression(C=1.0 / reg, max_iter=1000)),
    )
    pipeline.fit(x, y)
    return LinearModel(pipeline=pipeline, classes=classes)


def predict_linear(model: LinearModel, features) -> np.ndarray:
    """argmax of the per-class scores; ties go to the lowest class id."""
    scores = model.pipeline.decision_function(np.asarray(features, dtype=float))
    if scores.ndim == 1:
        # binary problems return one score for the positive class
        scores = np.column_stack([-scores, scores])
    return model.classes[np.argmax(scores, axis=1)]


def knn_predict(train_points, train_labels, query, k: int = 1):
    """Euclidean k-NN; nearest ties go to the lower row index, vote ties to the lower label."""
    train = np.asarray(train_points, dtype=float)
    if train.size == 0:
        raise InputError("k-NN needs at least one training point")
    train = as_point_set(train, name="train_points")
    labels = np.asarray(train_labels, dtype=int)
    if labels.size != train.shape[0]:
        raise InputError(f"{train.shape[0]} training points but {labels.size} labels")
    if not 1 <= k <= train.shape[0]:
        raise InputError(f"k must lie in [1, {train.shape[0]}], got {k}")
    single = np.asarray(query).ndim == 1
    q = as_point_set(query, dim=train.shape[1], name="query")
    distances = cdist(q, train)
    if k == 1:
        predicted = labels[np.argmin(distances, axis=1)]
    else:
        nearest = np.argsort(distances, axis=1, kind="stable")[:, :k]
        predicted = np.array([np.argmax(np.bincount(labels[row])) for row in nearest])
    return int(predicted[0]) if single else predicted


def kmeans(points, k: int, seed: int = 0) -> np.ndarray:
    """Lloyd iterations from a k-means++ start; k x d centroids."""
    x = as_point_set(points)
    if not 1 <= k <= x.shape[0]:
        raise InputError(f"k must lie in [1, {x.shape[0]}], got {k}")
    model = KMeans(n_clusters=k, init="k-means++", n_init=1, max_iter=100, tol=1e-8,
                   algorithm="lloyd", random_state=seed)
    model.fit(x)
    return model.cluster_centers_
