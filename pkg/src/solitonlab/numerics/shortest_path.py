"""Shortest paths on a weighted stencil grid, used as a distance oracle.

Edges join node ``(i, j)`` to ``(i + a, j + b)`` for every primitive vector
``(a, b)`` with ``max(|a|, |b|) <= stencil_radius``.  The weight of an edge is
the metric length of the straight chord, with the metric frozen at the chord
midpoint.  ``stencil_radius=1`` is the classical 8-connected grid; larger radii
shrink the angular (metrication) bias of grid paths.

Grid distances overestimate the true distance by a bias that is first order in
the grid spacing on smooth metrics plus an angular term that depends only on
the stencil.  :func:`richardson` combines two resolutions to cancel the first.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import MetricError
from . import _dijkstra_py

try:  # pragma: no cover - exercised via BACKEND
    if os.environ.get("SOLITONLAB_PURE_PYTHON") == "1":
        raise ImportError("pure python requested")
    from . import _dijkstra as _dijkstra_c
except ImportError:  # pragma: no cover
    _dijkstra_c = None

BACKEND = "cython" if _dijkstra_c is not None else "python"

__all__ = [
    "BACKEND",
    "MetricError",
    "GridDistance",
    "stencil",
    "grid_shortest_path",
    "grid_distance_field",
    "richardson",
]


@lru_cache(maxsize=None)
def _stencil(radius: int) -> np.ndarray:
    out = [
        (a, b)
        for a in range(-radius, radius + 1)
        for b in range(-radius, radius + 1)
        if (a, b) != (0, 0) and math.gcd(abs(a), abs(b)) == 1
    ]
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def stencil(radius: int) -> np.ndarray:
    """Primitive neighbour offsets of the given radius (8 for radius 1)."""
    if radius < 1:
        raise ValueError("stencil radius must be >= 1")
    return _stencil(int(radius)).copy()


def _metric_on(metric, X, Y):
    if hasattr(metric, "values"):
        G = np.asarray(metric.values(X, Y), dtype=float)
    else:
        G = np.asarray(metric(X, Y), dtype=float)
    G = np.broadcast_to(G, (2, 2) + X.shape)
    return G[0, 0], 0.5 * (G[0, 1] + G[1, 0]), G[1, 1]


@dataclass(frozen=True)
class GridDistance:
    """A solved distance field on a grid."""

    xs: np.ndarray
    ys: np.ndarray
    dist: np.ndarray  # shape (len(xs), len(ys))
    source: tuple

    def at(self, q) -> float:
        i = int(np.argmin(np.abs(self.xs - q[0])))
        j = int(np.argmin(np.abs(self.ys - q[1])))
        return float(self.dist[i, j])


def _prepare(metric, box, resolution, stencil_radius):
    (x0, x1), (y0, y1) = box
    if not (x1 > x0 and y1 > y0):
        raise ValueError("box must have positive extent")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    nx = ny = int(resolution) + 1
    hx = (x1 - x0) / resolution
    hy = (y1 - y0) / resolution
    xr = x0 + 0.5 * hx * np.arange(2 * nx - 1)
    yr = y0 + 0.5 * hy * np.arange(2 * ny - 1)
    X, Y = np.meshgrid(xr, yr, indexing="ij")
    g11, g12, g22 = _metric_on(metric, X, Y)
    det = g11 * g22 - g12 * g12
    bad = ~((g11 > 0) & (det > 0) & np.isfinite(det))
    if bad.any():
        k = np.argwhere(bad)[0]
        raise MetricError(f"metric not positive definite at ({X[tuple(k)]}, {Y[tuple(k)]})")
    st = _stencil(int(stencil_radius))
    c = lambda a: np.ascontiguousarray(a, dtype=float)
    return c(g11), c(g12), c(g22), nx, ny, hx, hy, st, xr[::2], yr[::2]


def _snap(p, xs, ys, box):
    (x0, x1), (y0, y1) = box
    tol = 1e-12 * max(x1 - x0, y1 - y0)
    if not (x0 - tol <= p[0] <= x1 + tol and y0 - tol <= p[1] <= y1 + tol):
        raise ValueError(f"point {tuple(p)} outside box")
    return int(np.argmin(np.abs(xs - p[0]))), int(np.argmin(np.abs(ys - p[1])))


def _kernel(backend):
    if backend == "auto":
        backend = BACKEND
    if backend == "cython":
        if _dijkstra_c is None:
            raise RuntimeError("compiled backend unavailable")
        return _dijkstra_c.dijkstra_grid
    if backend == "python":
        return _dijkstra_py.dijkstra_grid
    raise ValueError(f"unknown backend {backend!r}")


def grid_shortest_path(
    metric,
    box: Sequence[Sequence[float]],
    resolution: int,
    p: Sequence[float],
    q: Sequence[float],
    stencil_radius: int = 3,
    backend: str = "auto",
) -> float:
    """Grid distance between ``p`` and ``q`` (each snapped to its nearest node).

    ``metric`` is a 2D chart metric (anything with ``values(X, Y)`` returning a
    ``(2, 2, ...)`` array) or a callable with that signature.  ``box`` is
    ``((x0, x1), (y0, y1))``; each side is split into ``resolution`` cells.
    """
    g11, g12, g22, nx, ny, hx, hy, st, xs, ys = _prepare(metric, box, resolution, stencil_radius)
    i0, j0 = _snap(p, xs, ys, box)
    i1, j1 = _snap(q, xs, ys, box)
    dist = _kernel(backend)(g11, g12, g22, nx, ny, hx, hy, st, i0 * ny + j0, i1 * ny + j1)
    return float(dist[i1 * ny + j1])


def grid_distance_field(
    metric,
    box,
    resolution: int,
    p,
    stencil_radius: int = 3,
    backend: str = "auto",
) -> GridDistance:
    """Distances from ``p`` to every grid node."""
    g11, g12, g22, nx, ny, hx, hy, st, xs, ys = _prepare(metric, box, resolution, stencil_radius)
    i0, j0 = _snap(p, xs, ys, box)
    dist = _kernel(backend)(g11, g12, g22, nx, ny, hx, hy, st, i0 * ny + j0, -1)
    return GridDistance(xs, ys, dist.reshape(nx, ny), (float(xs[i0]), float(ys[j0])))


def richardson(coarse: float, fine: float, ratio: float = 2.0, order: float = 1.0) -> float:
    """Extrapolate two grid values assuming error ~ h**order."""
    k = ratio**order
    return (k * fine - coarse) / (k - 1.0)
