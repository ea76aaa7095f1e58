"""Gendered dyadic cubes and the density-driven good/bad partition.

A gendered cube is a pair (gender, dyadic cube): the gender is a nonzero
0/1 vector (2^d - 1 per cube) and the cube at level j has corner
``2^-j * corner_index`` and sidelength ``2^-j``.  No wavelets are ever
constructed; the inflated support is modeled as the ball
``B(corner, Gamma * sidelength)``, which is all the partition machinery
depends on.  A cube is *good* when its sidelength dominates the density
over its inflated support, *bad* otherwise; bad cubes have their sidelength
bounded by a multiple of the density anywhere in their support, which is the
step that tames the rough part of a smoothness split.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from .density import DensityField


class DyadicCube(NamedTuple):
    level: int
    corner_index: tuple[int, ...]
    gender: tuple[int, ...]

    @property
    def side(self) -> float:
        return 2.0**-self.level

    @property
    def corner(self) -> np.ndarray:
        return np.array(self.corner_index, dtype=float) * self.side

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.level - 1,
                          tuple(c // 2 for c in self.corner_index),
                          self.gender)


@dataclass(frozen=True)
class DyadicParams:
    """gamma >= 1 inflates supports; 0 < sigma < 2k is the smoothness index."""

    gamma: float
    sigma: float
    two_k: float

    def __post_init__(self):
        if not self.gamma >= 1:
            raise ValueError("gamma must be >= 1")
        if not 0 < self.sigma < self.two_k:
            raise ValueError("need 0 < sigma < 2k")


class UndersampledDensity(Exception):
    """A cube's inflated support holds no density sample."""


def genders(d: int) -> list[tuple[int, ...]]:
    """The 2^d - 1 nonzero elements of {0,1}^d, in lexicographic order."""
    return [g for g in product((0, 1), repeat=d) if any(g)]


def enumerate_cubes(box, levels, d: int) -> list[DyadicCube]:
    """All gendered cubes at the given levels whose cube intersects the box.

    Deterministic ordering: (level, corner index, gender).
    """
    lo = np.asarray(box[0], dtype=float).reshape(-1)
    hi = np.asarray(box[1], dtype=float).reshape(-1)
    gs = genders(d)
    out = []
    for level in levels:
        side = 2.0**-level
        ranges = [range(int(np.floor(lo[a] / side)), int(np.ceil(hi[a] / side)))
                  for a in range(d)]
        for corner in product(*ranges):
            for g in gs:
                out.append(DyadicCube(level, corner, g))
    return out


def _support_extrema(cubes, density: DensityField, gamma: float):
    """(rho_max, rho_min) of density samples in each cube's inflated support."""
    rho_max = np.empty(len(cubes))
    rho_min = np.empty(len(cubes))
    by_level: dict[int, list[int]] = {}
    for i, cube in enumerate(cubes):
        by_level.setdefault(cube.level, []).append(i)
    for level, idxs in by_level.items():
        radius = gamma * 2.0**-level
        corners = np.array([cubes[i].corner for i in idxs])
        hits = density._tree.query_ball_point(corners, radius)
        for i, hit in zip(idxs, hits):
            if not hit:
                raise UndersampledDensity(
                    f"no density sample within {radius:g} of cube {cubes[i]}"
                )
            vals = density.values[hit]
            rho_max[i] = vals.max()
            rho_min[i] = vals.min()
    return rho_max, rho_min


def classify(cubes, density: DensityField, params: DyadicParams):
    """Partition cubes into (good, bad) by sidelength versus support density.

    A cube is good iff its sidelength is at least the max density sample in
    ``B(corner, gamma * sidelength)``.  Raises
    :class:`UndersampledDensity` for cubes whose support holds no sample.
    """
    cubes = list(cubes)
    rho_max, _ = _support_extrema(cubes, density, params.gamma)
    good, bad = [], []
    for cube, r in zip(cubes, rho_max):
        (good if cube.side >= r else bad).append(cube)
    return good, bad


def bad_cube_bound_check(bad, density: DensityField, params: DyadicParams,
                         c_sm: float, r: float) -> float:
    """Worst ratio of ell(nu) against C * rho(x) over bad cubes and samples x.

    ``C = [c_sm (1 + 2 Gamma)^(-r)]^(-1)``; with (c_sm, r) certified on the
    density's samples the ratio never exceeds 1 (the pointwise argument of
    the rough-part estimate, restated at sample level).  Returns 0.0 when
    there are no bad cubes.
    """
    bad = list(bad)
    if not bad:
        return 0.0
    cap = 1.0 / (c_sm * (1.0 + 2.0 * params.gamma) ** (-r))
    _, rho_min = _support_extrema(bad, density, params.gamma)
    sides = np.array([c.side for c in bad])
    return float(np.max(sides / (cap * rho_min)))


def overlap_count(cubes, x, params: DyadicParams) -> int:
    """Number of cubes in the list whose inflated support contains x.

    For cubes of a fixed level this is bounded by
    ``(2^d - 1) (2 ceil(Gamma) + 1)^d`` independently of x and the level.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    count = 0
    for cube in cubes:
        if np.linalg.norm(x - cube.corner) <= params.gamma * cube.side:
            count += 1
    return count


def max_overlap(d: int, gamma: float) -> int:
    """The level-uniform overlap bound (2^d - 1)(2 ceil(Gamma) + 1)^d."""
    return (2**d - 1) * (2 * int(np.ceil(gamma)) + 1) ** d


def geometric_tail_bound(sigma: float, two_k: float, base_level: int) -> tuple[float, float]:
    """Closed forms of the two geometric series in the smooth/rough estimates.

    Returns ``(good_sum, bad_sum)``:

    * good: sum_{i>=0} (2^(j+i))^(sigma - 2k) = 2^(j (sigma-2k)) / (1 - 2^(sigma-2k)),
      over sidelengths 2^j and larger (requires sigma < 2k);
    * bad: sum_{i>=0} (2^(j-i))^sigma = 2^(j sigma) / (1 - 2^-sigma),
      over sidelengths 2^j and smaller (requires sigma > 0).

    Here ``2^j`` abbreviates ``2^base_level``.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive (bad-cube series diverges)")
    if not sigma < two_k:
        raise ValueError("sigma must be below 2k (good-cube series diverges)")
    e = sigma - two_k
    good = 2.0 ** (base_level * e) / (1.0 - 2.0**e)
    bad = 2.0 ** (base_level * sigma) / (1.0 - 2.0**-sigma)
    return good, bad
