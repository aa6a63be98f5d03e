import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np

from knotpursuit.basis import VanishingModel
from knotpursuit.errors import InputError
from knotpursuit.features.methods import method_registry
from knotpursuit.polycore import as_point_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClassFeatureModel:
    """One fitted model per class and the vanishing polynomials used as features.

    ``selected[i]`` lists, in construction order, the positions within class
    i's vanishing polynomials that contribute feature columns.
    """

    class_models: tuple[VanishingModel, ...]
    selected: tuple[tuple[int, ...], ...]
    method: str
    hd_fraction: Optional[float] = None

    @property
    def n_classes(self) -> int:
        return len(self.class_models)

    @property
    def n_features(self) -> int:
        return sum(len(s) for s in self.selected)

    @property
    def layout(self) -> list[tuple[int, int]]:
        """(class id, polynomial position) for every feature column."""
        return [(i, j) for i, sel in enumerate(self.selected) for j in sel]

    @property
    def feature_degrees(self) -> list[int]:
        return [self.class_models[i].degrees[j] for i, j in self.layout]

    @property
    def mean_degree(self) -> float:
        degrees = self.feature_degrees
        return float(np.mean(degrees)) if degrees else 0.0


def train_class_models(
    points,
    labels,
    method: str = "proposed",
    params: Optional[dict[str, Any]] = None,
    n_jobs: int = 1,
) -> ClassFeatureModel:
    x = as_point_set(points)
    y = np.asarray(labels)
    if y.shape != (x.shape[0],):
        raise InputError(f"expected {x.shape[0]} labels, got shape {y.shape}")
    classes = np.unique(y)
    if classes.size < 2:
        raise InputError("at least two classes are required")
    if not np.array_equal(classes, np.arange(classes.size)):
        raise InputError("class ids must be contiguous from 0")
    trainer = method_registry.get(method)
    if trainer is None:
        raise InputError(f"unknown method {method!r}")

    def train(c: int) -> VanishingModel:
        model = trainer.fit(x[y == c], params)
        logger.info("%s class %d: %d vanishing polynomials", trainer.display_name, c, model.n_features)
        return model

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            models = tuple(pool.map(train, classes.tolist()))
    else:
        models = tuple(train(c) for c in classes.tolist())
    return ClassFeatureModel(
        class_models=models,
        selected=tuple(tuple(range(m.n_features)) for m in models),
        method=method,
    )


def restrict_higher_degrees(model: ClassFeatureModel, fraction: float) -> ClassFeatureModel:
    """Keep, per class, the ceil(fraction * n) highest-degree polynomials."""
    if not 0 < fraction <= 1:
        raise InputError(f"fraction must lie in (0, 1], got {fraction}")
    selected = []
    for class_model, sel in zip(model.class_models, model.selected):
        degrees = class_model.degrees
        keep = math.ceil(fraction * len(sel) - 1e-9)
        ranked = sorted(sel, key=lambda j: (-degrees[j], j))[:keep]
        selected.append(tuple(sorted(ranked)))
    return replace(model, selected=tuple(selected), hd_fraction=fraction)
