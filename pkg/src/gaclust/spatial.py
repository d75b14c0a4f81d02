"""Planar k-nearest-neighbor queries over point positions.

A uniform grid of square cells accelerates queries; ring expansion with
a distance certificate keeps results exact. Neighbor order is ascending
by (squared planar distance, point id), so answers are deterministic and
identical across backends, builds, and thread counts.
"""

from dataclasses import dataclass

import numpy as np

from .accel import BACKEND
from .errors import ValidationError
from . import kernels


@dataclass(frozen=True, eq=False)
class PlanarIndex:
    """Immutable grid index over planar (x, y) positions."""

    xs: np.ndarray
    ys: np.ndarray
    x0: float
    y0: float
    h: float
    gx: int
    gy: int
    cell_start: np.ndarray  # gx*gy + 1 prefix offsets into order
    order: np.ndarray  # point ids grouped by cell, ascending id within a cell

    def __len__(self) -> int:
        return self.xs.shape[0]


def _build_from_xy(xs: np.ndarray, ys: np.ndarray) -> PlanarIndex:
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    n = xs.shape[0]
    x0 = float(xs.min())
    y0 = float(ys.min())
    ex = float(xs.max()) - x0
    ey = float(ys.max()) - y0
    # Square cells sized for a few points per cell; degenerate extents
    # collapse to a single row/column of cells.
    if ex > 0.0 and ey > 0.0:
        h = float(np.sqrt(ex * ey / max(n, 1)))
    else:
        h = max(ex, ey) / max(n, 1)
    if h <= 0.0:
        h = 1.0
    gx = max(1, int(np.ceil(ex / h)) if ex > 0 else 1)
    gy = max(1, int(np.ceil(ey / h)) if ey > 0 else 1)
    # Bound total cells to O(N) so adversarial aspect ratios cannot blow
    # up memory; scaling h up keeps correctness (certificate uses h).
    while gx * gy > 4 * n + 4:
        h *= 1.5
        gx = max(1, int(np.ceil(ex / h)) if ex > 0 else 1)
        gy = max(1, int(np.ceil(ey / h)) if ey > 0 else 1)
    cx = np.minimum((np.floor((xs - x0) / h)).astype(np.int64), gx - 1)
    cy = np.minimum((np.floor((ys - y0) / h)).astype(np.int64), gy - 1)
    np.maximum(cx, 0, out=cx)
    np.maximum(cy, 0, out=cy)
    cell = cx * gy + cy
    order = np.argsort(cell, kind="stable").astype(np.int64)  # stable: id order in cell
    counts = np.bincount(cell, minlength=gx * gy)
    cell_start = np.zeros(gx * gy + 1, dtype=np.int64)
    np.cumsum(counts, out=cell_start[1:])
    xs.setflags(write=False)
    ys.setflags(write=False)
    order.setflags(write=False)
    cell_start.setflags(write=False)
    return PlanarIndex(xs, ys, x0, y0, float(h), gx, gy, cell_start, order)


def build_planar_index(cloud) -> PlanarIndex:
    """Index a PointCloud's planar coordinates; z and attributes are ignored."""
    return _build_from_xy(cloud.x, cloud.y)


def _query(index: PlanarIndex, qids: np.ndarray, k: int) -> np.ndarray:
    if BACKEND == "numba":
        return kernels.knn_query_grid_numba(
            qids,
            index.xs,
            index.ys,
            index.x0,
            index.y0,
            index.h,
            index.gx,
            index.gy,
            index.cell_start,
            index.order,
            k,
        )
    return kernels.knn_query_numpy(qids, index.xs, index.ys, k)


def k_nearest_planar(index: PlanarIndex, point_id: int, k: int) -> np.ndarray:
    """Ids of the min(k, N-1) nearest other points, nearest first."""
    n = len(index)
    if not 0 <= point_id < n:
        raise ValidationError(f"point id {point_id} outside [0, {n})")
    if k < 1:
        raise ValidationError("neighbor count k must be >= 1")
    qids = np.array([point_id], dtype=np.int64)
    return _query(index, qids, k)[0]


def neighbor_table(index: PlanarIndex, k: int) -> np.ndarray:
    """All-points kNN table, shape (N, min(k, N-1))."""
    if k < 1:
        raise ValidationError("neighbor count k must be >= 1")
    qids = np.arange(len(index), dtype=np.int64)
    return _query(index, qids, k)
