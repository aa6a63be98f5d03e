import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from knotpursuit.basis import VanishingModel
from knotpursuit.errors import InputError

Bounds = tuple[tuple[float, float], tuple[float, float]]


@dataclass
class ContourGrid:
    xs: np.ndarray
    ys: np.ndarray
    coords: np.ndarray  # resolution^2 x 2, x varies fastest
    values: np.ndarray  # resolution^2 x |G|
    degrees: list[int]
    knots: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "x": self.xs.tolist(),
            "y": self.ys.tolist(),
            "degrees": self.degrees,
            "points": self.coords.tolist(),
            "values": self.values.tolist(),
            "knots": self.knots.tolist() if self.knots is not None else None,
        }


def contour_grid(model: VanishingModel, bounds: Bounds, resolution: int) -> ContourGrid:
    if resolution < 2:
        raise InputError(f"resolution must be >= 2, got {resolution}")
    if model.registry.n_vars != 2:
        raise InputError("contour grids are only defined for 2-d models")
    (x_lo, x_hi), (y_lo, y_hi) = bounds
    if not (x_lo < x_hi and y_lo < y_hi):
        raise InputError(f"empty bounds {bounds}")
    xs = np.linspace(x_lo, x_hi, resolution)
    ys = np.linspace(y_lo, y_hi, resolution)
    gx, gy = np.meshgrid(xs, ys)
    coords = np.column_stack([gx.ravel(), gy.ravel()])
    return ContourGrid(
        xs=xs,
        ys=ys,
        coords=coords,
        values=model.evaluate_vanishing(coords),
        degrees=model.degrees,
        knots=getattr(model, "knots", None),
    )


def export_contour_grid(
    model: VanishingModel,
    bounds: Bounds,
    resolution: int,
    path: Union[str, Path],
    fmt: str = "csv",
) -> ContourGrid:
    """Write g(x, y) for every vanishing polynomial on a resolution x resolution grid.

    CSV output has one row per grid point; knots go to a sibling ``*_knots.csv``.
    """
    grid = contour_grid(model, bounds, resolution)
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(grid.to_dict()))
    elif fmt == "csv":
        header = ["x", "y"] + [f"g{j}_deg{d}" for j, d in enumerate(grid.degrees)]
        np.savetxt(path, np.hstack([grid.coords, grid.values]), delimiter=",",
                   header=",".join(header), comments="", fmt="%.17g")
        if grid.knots is not None:
            np.savetxt(knots_path(path), grid.knots, delimiter=",", header="x,y", comments="", fmt="%.17g")
    else:
        raise InputError(f"unknown format {fmt!r}")
    return grid


def knots_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_knots.csv")
