"""Classification experiments: vanishing-polynomial features with a linear
classifier, and nearest-neighbour classification with data knots."""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from knotpursuit.errors import InputError
from knotpursuit.features import (
    ClassFeatureModel,
    extract_feature_matrix,
    restrict_higher_degrees,
    train_class_models,
)
from knotpursuit.harness.classifiers import kmeans, knn_predict, predict_linear, train_linear
from knotpursuit.harness.datasets import LabeledDataset
from knotpursuit.harness.knots import distinct_knots, knotting_ratio
from knotpursuit.harness.splits import Metric, cross_validate, split_train_test
from knotpursuit.models import ExperimentReport, MethodSummary
from knotpursuit.settings import settings

logger = logging.getLogger(__name__)

LINEAR_SUBSTITUTION_NOTE = "linear SVM replaced by one-vs-rest L2 logistic regression"


class ExperimentConfig(BaseModel):
    runs: int = Field(default_factory=lambda: settings.runs, ge=1)
    seed: int = Field(default_factory=lambda: settings.seed)
    train_fraction: float = Field(default_factory=lambda: settings.train_fraction, gt=0, lt=1)
    cv_folds: int = Field(default_factory=lambda: settings.cv_folds, ge=2)
    epsilon_grid: list[float] = Field(default_factory=lambda: list(settings.epsilon_grid), min_length=1)
    lambda_grid: list[float] = Field(default_factory=lambda: list(settings.lambda_grid), min_length=1)
    hd_fraction: float = Field(default_factory=lambda: settings.hd_fraction, gt=0, le=1)
    knot_merge_tol: float = Field(default_factory=lambda: settings.knot_merge_tol, gt=0)
    linear_reg: float = Field(default_factory=lambda: settings.linear_reg, gt=0)
    record_runtime: bool = Field(default_factory=lambda: settings.record_runtime)
    pursuit: dict[str, Any] = Field(default_factory=dict)

    @property
    def seeds(self) -> list[int]:
        return [self.seed + r for r in range(self.runs)]

    def grid(self, method: str) -> dict[str, list[float]]:
        if method == "vca":
            return {"epsilon": self.epsilon_grid}
        return {"epsilon": self.epsilon_grid, "lam": self.lambda_grid}


@dataclass
class RunOutcome:
    accuracy: float
    runtime: Optional[float]
    n_features: int
    mean_degree: float


@dataclass
class _Collector:
    accuracies: list[float] = field(default_factory=list)
    runtimes: list[float] = field(default_factory=list)
    n_features: list[float] = field(default_factory=list)
    degrees: list[float] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)

    def add(self, outcome: RunOutcome):
        self.accuracies.append(outcome.accuracy)
        if outcome.runtime is not None:
            self.runtimes.append(outcome.runtime)
        self.n_features.append(outcome.n_features)
        self.degrees.append(outcome.mean_degree)

    def summary(self, dataset: str, method: str) -> MethodSummary:
        def mean(values: list[float]) -> Optional[float]:
            return float(np.mean(values)) if values else None

        return MethodSummary(
            dataset=dataset,
            method=method,
            accuracy_mean=float(np.mean(self.accuracies)),
            accuracy_std=float(np.std(self.accuracies)),
            accuracies=self.accuracies,
            runtime_mean=mean(self.runtimes),
            n_features_mean=mean(self.n_features),
            mean_degree=mean(self.degrees),
            knotting_ratio=mean(self.ratios),
        )


def evaluate_linear(
    model: ClassFeatureModel,
    train: LabeledDataset,
    test: LabeledDataset,
    reg: float,
    record_runtime: bool = True,
) -> RunOutcome:
    """Train a linear classifier on |g(x)| features and score it on ``test``.

    The runtime covers feature extraction and prediction on the test split.
    """
    if model.n_features == 0:
        majority = int(np.argmax(np.bincount(train.labels)))
        return RunOutcome(float(np.mean(test.labels == majority)), None, 0, 0.0)
    classifier = train_linear(extract_feature_matrix(train.points, model), train.labels, reg)
    start = time.perf_counter()
    predicted = predict_linear(classifier, extract_feature_matrix(test.points, model))
    elapsed = time.perf_counter() - start
    return RunOutcome(
        accuracy=float(np.mean(predicted == test.labels)),
        runtime=elapsed if record_runtime else None,
        n_features=model.n_features,
        mean_degree=model.mean_degree,
    )


def _linear_metric(method: str, reg: float, extra: dict[str, Any]) -> Metric:
    def metric(fit_part: LabeledDataset, val_part: LabeledDataset, params: dict) -> float:
        model = train_class_models(fit_part.points, fit_part.labels, method, {**extra, **params})
        return evaluate_linear(model, fit_part, val_part, reg, record_runtime=False).accuracy

    return metric


def class_knots(model: ClassFeatureModel, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Distinct data knots of every class and their class labels."""
    points, labels = [], []
    for label, class_model in enumerate(model.class_models):
        knots = getattr(class_model, "knots", None)
        if knots is None:
            raise InputError("knot classification needs models with data knots")
        distinct = distinct_knots(knots, tol)
        points.append(distinct)
        labels.append(np.full(distinct.shape[0], label))
    return np.vstack(points), np.concatenate(labels)


def _knot_metric(tol: float, extra: dict[str, Any]) -> Metric:
    def metric(fit_part: LabeledDataset, val_part: LabeledDataset, params: dict) -> float:
        model = train_class_models(fit_part.points, fit_part.labels, "proposed", {**extra, **params})
        knots, labels = class_knots(model, tol)
        return float(np.mean(knn_predict(knots, labels, val_part.points) == val_part.labels))

    return metric


def run_table1(datasets: Sequence[LabeledDataset], cfg: Optional[ExperimentConfig] = None) -> ExperimentReport:
    cfg = cfg or ExperimentConfig()
    rows: list[MethodSummary] = []
    for ds in datasets:
        collectors = {name: _Collector() for name in ("proposed", "vca", "proposed-hd", "vca-hd")}
        for seed in cfg.seeds:
            train, test = split_train_test(ds, cfg.train_fraction, seed)
            for method in ("proposed", "vca"):
                extra = cfg.pursuit if method == "proposed" else {}
                metric = _linear_metric(method, cfg.linear_reg, extra)
                best, _ = cross_validate(train, cfg.grid(method), metric, folds=cfg.cv_folds, seed=seed)
                params = {**extra, **best}
                model = train_class_models(train.points, train.labels, method, params)
                full = evaluate_linear(model, train, test, cfg.linear_reg, cfg.record_runtime)
                hd = evaluate_linear(
                    restrict_higher_degrees(model, cfg.hd_fraction), train, test, cfg.linear_reg, cfg.record_runtime
                )
                collectors[method].add(full)
                collectors[f"{method}-hd"].add(hd)
                logger.info(
                    "%s seed %d %s: acc=%.3f (hd %.3f), %d features, params %s",
                    ds.name, seed, method, full.accuracy, hd.accuracy, full.n_features, best,
                )
        rows.extend(collector.summary(ds.name, name) for name, collector in collectors.items())
    return ExperimentReport(
        table="table1",
        runs=cfg.runs,
        seeds=cfg.seeds,
        rows=rows,
        config=cfg.model_dump(),
        notes=[LINEAR_SUBSTITUTION_NOTE],
    )


def run_table2(datasets: Sequence[LabeledDataset], cfg: Optional[ExperimentConfig] = None) -> ExperimentReport:
    cfg = cfg or ExperimentConfig()
    rows: list[MethodSummary] = []
    for ds in datasets:
        collectors = {name: _Collector() for name in ("knots", "kmeans", "original")}
        for seed in cfg.seeds:
            train, test = split_train_test(ds, cfg.train_fraction, seed)
            metric = _knot_metric(cfg.knot_merge_tol, cfg.pursuit)
            best, _ = cross_validate(train, cfg.grid("proposed"), metric, folds=cfg.cv_folds, seed=seed)
            model = train_class_models(train.points, train.labels, "proposed", {**cfg.pursuit, **best})
            knots, knot_labels = class_knots(model, cfg.knot_merge_tol)

            centroids, centroid_labels = [], []
            for label in range(model.n_classes):
                k = int(np.sum(knot_labels == label))
                centroids.append(kmeans(train.class_points(label), k, seed))
                centroid_labels.append(np.full(k, label))

            references = {
                "knots": (knots, knot_labels),
                "kmeans": (np.vstack(centroids), np.concatenate(centroid_labels)),
                "original": (train.points, train.labels),
            }
            for name, (ref_points, ref_labels) in references.items():
                start = time.perf_counter()
                predicted = knn_predict(ref_points, ref_labels, test.points)
                elapsed = time.perf_counter() - start
                collectors[name].add(
                    RunOutcome(
                        accuracy=float(np.mean(predicted == test.labels)),
                        runtime=elapsed if cfg.record_runtime else None,
                        n_features=ref_points.shape[0],
                        mean_degree=model.mean_degree if name == "knots" else 0.0,
                    )
                )
            ratio = sum(
                knotting_ratio(class_model.knots, len(train), cfg.knot_merge_tol)
                for class_model in model.class_models
            )
            collectors["knots"].ratios.append(ratio)
            logger.info(
                "%s seed %d: knots acc=%.3f ratio=%.3f, params %s",
                ds.name, seed, collectors["knots"].accuracies[-1], ratio, best,
            )
        rows.extend(collector.summary(ds.name, name) for name, collector in collectors.items())
    return ExperimentReport(
        table="table2",
        runs=cfg.runs,
        seeds=cfg.seeds,
        rows=rows,
        config=cfg.model_dump(),
        notes=[f"knots merged within {cfg.knot_merge_tol:g}"],
    )
