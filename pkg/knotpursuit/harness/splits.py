import logging
from typing import Any, Callable, Mapping, Sequence, Union

import numpy as np
from sklearn.model_selection import ParameterGrid, StratifiedKFold, train_test_split

from knotpursuit.errors import InputError
from knotpursuit.harness.datasets import LabeledDataset, ScalingRecord

logger = logging.getLogger(__name__)

# metric(train, validation, params) -> score, higher is better
Metric = Callable[[LabeledDataset, LabeledDataset, dict[str, Any]], float]


def split_train_test(
    ds: LabeledDataset,
    train_fraction: float = 0.6,
    seed: int = 0,
    scale: bool = True,
) -> tuple[LabeledDataset, LabeledDataset]:
    """Stratified split; the [-1, 1] scaling is fitted on the training rows."""
    if not 0 < train_fraction < 1:
        raise InputError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    counts = np.bincount(ds.labels)
    if counts.min() < 2:
        raise InputError(f"{ds.name}: every class needs at least 2 points to split")
    rows = np.arange(len(ds))
    train_rows, test_rows = train_test_split(
        rows, train_size=train_fraction, stratify=ds.labels, random_state=seed
    )
    train_rows, test_rows = np.sort(train_rows), np.sort(test_rows)
    train, test = ds.subset(train_rows), ds.subset(test_rows)
    if scale:
        scaling = ScalingRecord.fit(train.points)
        train, test = train.scaled(scaling), test.scaled(scaling)
    return train, test


def _tie_key(params: Mapping[str, Any]) -> tuple[float, float]:
    return (float(params.get("epsilon", 0.0)), float(params.get("lam", 0.0)))


def cross_validate(
    train: LabeledDataset,
    param_grid: Union[Mapping[str, Sequence[Any]], Sequence[Mapping[str, Any]]],
    metric: Metric,
    folds: int = 3,
    seed: int = 0,
) -> tuple[dict[str, Any], list[tuple[dict[str, Any], float]]]:
    """Exhaustive grid search on stratified folds.

    Returns the best parameters and the mean score of every grid entry. Equal
    scores prefer the smallest epsilon, then the smallest lam.
    """
    grid = list(ParameterGrid(param_grid))
    if not grid:
        raise InputError("parameter grid is empty")
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    fold_rows = list(splitter.split(train.points, train.labels))
    scores: list[tuple[dict[str, Any], float]] = []
    for params in grid:
        fold_scores = [
            metric(train.subset(fit_rows), train.subset(val_rows), dict(params))
            for fit_rows, val_rows in fold_rows
        ]
        mean = float(np.mean(fold_scores))
        scores.append((dict(params), mean))
        logger.debug("cv %s: %.4f", params, mean)
    best_score = max(score for _, score in scores)
    best = min((params for params, score in scores if score == best_score), key=_tie_key)
    return best, scores
