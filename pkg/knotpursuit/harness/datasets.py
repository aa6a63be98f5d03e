import csv
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np
from sklearn.datasets import load_iris, load_wine

from knotpursuit.errors import InputError, ParseError
from knotpursuit.polycore import as_point_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalingRecord:
    """Per-column min-max map onto [-1, 1]; constant columns map to 0."""

    mins: np.ndarray
    maxs: np.ndarray

    @classmethod
    def fit(cls, points) -> "ScalingRecord":
        x = as_point_set(points)
        return cls(mins=x.min(axis=0), maxs=x.max(axis=0))

    @property
    def _span(self) -> np.ndarray:
        return self.maxs - self.mins

    def apply(self, points) -> np.ndarray:
        x = as_point_set(points, dim=self.mins.size)
        span = self._span
        out = np.zeros_like(x)
        varying = span > 0
        out[:, varying] = 2.0 * (x[:, varying] - self.mins[varying]) / span[varying] - 1.0
        return out

    def unscale(self, points) -> np.ndarray:
        x = as_point_set(points, dim=self.mins.size)
        span = self._span
        out = np.tile(self.mins, (x.shape[0], 1))
        varying = span > 0
        out[:, varying] = (x[:, varying] + 1.0) / 2.0 * span[varying] + self.mins[varying]
        return out


@dataclass(frozen=True)
class LabeledDataset:
    points: np.ndarray
    labels: np.ndarray
    name: str = "dataset"
    label_names: tuple[str, ...] = ()
    scaling: Optional[ScalingRecord] = None

    def __post_init__(self):
        if self.labels.shape != (self.points.shape[0],):
            raise InputError(f"{self.name}: {self.points.shape[0]} points but {self.labels.size} labels")
        if self.labels.size and self.labels.min() < 0:
            raise InputError(f"{self.name}: class ids must be non-negative")

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def subset(self, rows) -> "LabeledDataset":
        return replace(self, points=self.points[rows], labels=self.labels[rows])

    def class_points(self, label: int) -> np.ndarray:
        return self.points[self.labels == label]

    def scaled(self, scaling: ScalingRecord) -> "LabeledDataset":
        return replace(self, points=scaling.apply(self.points), scaling=scaling)


def _resolve_label_column(header: Optional[list[str]], label_column: Union[int, str], width: int) -> int:
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None or label_column not in header:
            raise InputError(f"label column {label_column!r} not found")
        return header.index(label_column)
    index = int(label_column)
    if index < 0:
        index += width
    if not 0 <= index < width:
        raise InputError(f"label column {label_column} out of range for {width} columns")
    return index


def load_csv(
    path: Union[str, Path],
    label_column: Union[int, str] = -1,
    has_header: bool = False,
    name: Optional[str] = None,
) -> LabeledDataset:
    """Read a numeric CSV with one label column; labels get ids in sorted order."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    header = None
    first_row = 1
    if has_header:
        if not rows:
            raise InputError(f"{path} is empty")
        header = [cell.strip() for cell in rows.pop(0)]
        first_row = 2
    if not rows:
        raise InputError(f"{path} has no data rows")
    width = len(header) if header is not None else len(rows[0])
    label_index = _resolve_label_column(header, label_column, width)

    features: list[list[float]] = []
    raw_labels: list[str] = []
    for offset, row in enumerate(rows):
        row_no = first_row + offset
        if len(row) != width:
            raise ParseError(f"expected {width} cells, got {len(row)}", row=row_no)
        values = []
        for col, cell in enumerate(row):
            if col == label_index:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric value {cell!r}", row=row_no, column=col + 1) from None
        features.append(values)
        raw_labels.append(row[label_index].strip())

    label_names = tuple(sorted(set(raw_labels)))
    ids = {label: i for i, label in enumerate(label_names)}
    points = as_point_set(np.array(features, dtype=float), name=str(path))
    labels = np.array([ids[label] for label in raw_labels], dtype=int)
    logger.info("loaded %s: %d points, %d features, %d classes", path, *points.shape, len(label_names))
    return LabeledDataset(points=points, labels=labels, name=name or path.stem, label_names=label_names)


BUILTIN_DATASETS = {"iris": load_iris, "wine": load_wine}


def load_builtin(name: str) -> LabeledDataset:
    loader = BUILTIN_DATASETS.get(name)
    if loader is None:
        raise InputError(f"unknown dataset {name!r}; choose from {sorted(BUILTIN_DATASETS)}")
    bunch = loader()
    return LabeledDataset(
        points=np.asarray(bunch.data, dtype=float),
        labels=np.asarray(bunch.target, dtype=int),
        name=name,
        label_names=tuple(str(t) for t in bunch.target_names),
    )


def load_points(path: Union[str, Path], has_header: bool = False) -> np.ndarray:
    """Read an unlabeled numeric CSV as an N x d point set."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    first_row = 1
    if has_header and rows:
        rows.pop(0)
        first_row = 2
    if not rows:
        raise InputError(f"{path} has no data rows")
    width = len(rows[0])
    values = np.empty((len(rows), width))
    for offset, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"expected {width} cells, got {len(row)}", row=first_row + offset)
        for col, cell in enumerate(row):
            try:
                values[offset, col] = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric value {cell!r}", row=first_row + offset, column=col + 1) from None
    return as_point_set(values, name=str(path))
