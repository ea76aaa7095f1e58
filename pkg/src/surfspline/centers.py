"""Immutable center sets in R^d with exact-radius neighbor queries.

All distances are Euclidean.  A :class:`CenterSet` is read-only after
construction, so queries are safe to issue concurrently.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

#: Two centers closer than this are considered duplicates and rejected;
#: duplicates make the downstream Vandermonde systems rank-deficient.
DUPLICATE_TOL = 1e-12


class CenterSet:
    """A finite point cloud in R^d with optional per-point resolution tags.

    Parameters
    ----------
    points : array_like, shape (n, d)
        Center coordinates.  Must be finite and pairwise distinct
        (separation > ``DUPLICATE_TOL``).
    levels : array_like of int, shape (n,), optional
        Resolution-region index for each center (used by the
        multiresolution placement; plain clouds leave this ``None``).
    """

    def __init__(self, points, levels=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a nonempty (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("center coordinates must be finite")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        self.points = pts
        self.dim = pts.shape[1]
        if levels is not None:
            levels = np.asarray(levels, dtype=int)
            if levels.shape != (pts.shape[0],):
                raise ValueError("levels must have one entry per point")
            levels.setflags(write=False)
        self.levels = levels
        self._tree = cKDTree(pts)
        if len(pts) > 1 and self._tree.query_pairs(DUPLICATE_TOL, output_type="ndarray").size:
            raise ValueError(f"duplicate centers within {DUPLICATE_TOL}")

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"CenterSet(n={len(self)}, dim={self.dim})"

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.dim,):
            raise ValueError(f"query point has dimension {x.shape[0]}, expected {self.dim}")
        if not np.all(np.isfinite(x)):
            raise ValueError("query point must be finite")
        return x

    def neighbor_arrays(self, center, radius) -> tuple[np.ndarray, np.ndarray]:
        """Indices and distances of centers with |xi - center| <= radius.

        Sorted by ascending distance, ties broken by index.  This is the
        array-valued workhorse behind :func:`neighbors_within`.
        """
        center = self._check_point(center)
        if not radius > 0:
            raise ValueError("radius must be positive")
        idx = np.asarray(self._tree.query_ball_point(center, radius), dtype=np.intp)
        if idx.size == 0:
            return idx, np.empty(0)
        dist = np.linalg.norm(self.points[idx] - center, axis=1)
        keep = dist <= radius
        idx, dist = idx[keep], dist[keep]
        order = np.lexsort((idx, dist))
        return idx[order], dist[order]


def neighbors_within(cs: CenterSet, center, radius) -> list[tuple[int, np.ndarray, float]]:
    """All centers within ``radius`` of ``center`` as (index, point, distance).

    Returned sorted by ascending distance with deterministic tie order
    (by index).  Boundary points (distance exactly ``radius``) are included.
    """
    idx, dist = cs.neighbor_arrays(center, radius)
    return [(int(i), cs.points[i], float(r)) for i, r in zip(idx, dist)]


def sorted_candidate_radii(cs: CenterSet, center) -> np.ndarray:
    """Strictly increasing distinct distances from ``center`` to all centers.

    Distances closer than ``DUPLICATE_TOL`` are merged (the smaller is kept).
    The result enumerates every radius at which the neighbor set of
    ``center`` can change, which drives the minimal-density search.
    """
    if len(cs) == 0:
        raise ValueError("center set is empty")
    center = cs._check_point(center)
    dist = np.sort(np.linalg.norm(cs.points - center, axis=1))
    keep = np.empty(dist.shape, dtype=bool)
    keep[0] = True
    np.greater(np.diff(dist), DUPLICATE_TOL, out=keep[1:])
    return dist[keep]
