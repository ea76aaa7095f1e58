"""Local density fields, majorants, and global-compatibility certificates.

The minimal local density at a point is the smallest radius capturing a
stable polynomial reproduction.  A density field is represented by samples
``(point, rho)``; the majorant and the two global-compatibility properties
(slow growth, self-majorization) are evaluated exhaustively over the sample
set, so the certificates are exact on the samples and heuristic off them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .centers import CenterSet, sorted_candidate_radii
from .polyrep import (
    PolyRep,
    ReproductionError,
    build_reproduction,
    polynomial_dim,
)

#: Effective radius substituted when the minimal candidate radius is zero
#: (base point coincident with a center); anything below the duplicate
#: tolerance captures only that center.
_ZERO_RADIUS = 1e-13


class NoAdmissibleRadius(Exception):
    """No radius captures a unisolvent neighbor set under the stability cap."""


def default_stability_cap(dim: int, degree: int) -> float:
    """Default cap K = 4 * dim Pi_degree.

    Minimum-norm weights on unisolvent gridded neighborhoods satisfy this
    with slack; override it for adversarial configurations.
    """
    return 4.0 * polynomial_dim(dim, degree)


@dataclass(frozen=True)
class DensityParams:
    """Exponents and caps attached to a density field.

    degree         -- polynomial precision of the underlying reproductions
    stability_cap  -- K > 1 bounding the absolute weight sums
    majorant_exponent -- r > 0, decay rate in the majorant / self-majorization
    growth_exponent   -- epsilon in (0, 1), the slow-growth exponent
    """

    degree: int
    stability_cap: float
    majorant_exponent: float
    growth_exponent: float

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if not self.stability_cap > 1:
            raise ValueError("stability_cap must exceed 1")
        if not self.majorant_exponent > 0:
            raise ValueError("majorant_exponent must be positive")
        if not 0 < self.growth_exponent < 1:
            raise ValueError("growth_exponent must lie in (0, 1)")


class DensityField:
    """A sampled density: points (n, d) with strictly positive values."""

    def __init__(self, points, values, params: DensityParams | None = None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        vals = np.asarray(values, dtype=float).reshape(-1)
        if pts.shape[0] != vals.shape[0] or pts.shape[0] == 0:
            raise ValueError("need one value per sample point, at least one sample")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise ValueError("samples must be finite")
        if not np.all(vals > 0):
            raise ValueError("density values must be strictly positive")
        pts.setflags(write=False)
        vals.setflags(write=False)
        self.points = pts
        self.values = vals
        self.params = params
        self._tree = cKDTree(pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def nearest(self, x) -> float:
        """Density value at the sample nearest to x."""
        _, i = self._tree.query(np.asarray(x, dtype=float).reshape(-1))
        return float(self.values[i])

    def nearest_many(self, xs) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        _, i = self._tree.query(xs)
        return self.values[i]


def minimal_density(
    cs: CenterSet,
    alpha,
    degree: int,
    stability_cap: float | None = None,
) -> tuple[float, PolyRep]:
    """Smallest candidate radius admitting a K-stable reproduction at alpha.

    The candidate radii are the distinct center distances from ``alpha``.
    Unisolvency is monotone in the radius, so the smallest unisolvent
    candidate is located by exponential search plus bisection; the stability
    cap need not be monotone, so from there the candidates are scanned
    linearly until the cap is met.

    Returns ``(rho, witness)`` where ``witness`` is the reproduction built at
    radius ``rho``.  Raises :class:`NoAdmissibleRadius` if even the full set
    fails.
    """
    if stability_cap is None:
        stability_cap = default_stability_cap(cs.dim, degree)
    m = polynomial_dim(cs.dim, degree)
    if len(cs) < m:
        raise NoAdmissibleRadius(f"only {len(cs)} centers, need {m} for degree {degree}")
    alpha = cs._check_point(alpha)
    radii = sorted_candidate_radii(cs, alpha)
    dists = np.sort(np.linalg.norm(cs.points - alpha, axis=1))
    counts = np.searchsorted(dists, radii + _ZERO_RADIUS, side="right")
    first = int(np.searchsorted(counts, m, side="left"))
    if first >= radii.size:
        raise NoAdmissibleRadius("full center set smaller than the polynomial space")

    def attempt(i: int) -> PolyRep | None:
        r = max(radii[i], _ZERO_RADIUS)
        try:
            return build_reproduction(cs, alpha, r, degree)
        except ReproductionError:
            return None

    # exponential ascent to the first success
    last = radii.size - 1
    lo, hi, pr_hi = first - 1, first, attempt(first)
    step = 1
    while pr_hi is None:
        if hi == last:
            raise NoAdmissibleRadius("no unisolvent neighbor set at any radius")
        lo = hi
        step *= 2
        hi = min(hi + step, last)
        pr_hi = attempt(hi)
    # bisection: success is monotone in the radius for unisolvency
    while hi - lo > 1:
        mid = (lo + hi) // 2
        pr_mid = attempt(mid)
        if pr_mid is None:
            lo = mid
        else:
            hi, pr_hi = mid, pr_mid
    # linear scan upward for the stability cap (not monotone in general)
    i, pr = hi, pr_hi
    while pr is None or not pr.stability < stability_cap:
        i += 1
        if i > last:
            raise NoAdmissibleRadius(
                f"stability cap {stability_cap:g} never met (best Sum|a| = "
                f"{pr.stability if pr else float('nan'):g})"
            )
        pr = attempt(i)
    return float(pr.radius), pr


def majorant(df: DensityField, x, r: float) -> float:
    """Finite-sample majorant H(x) = max_y rho(y) (1 + |x-y|/rho(y))^(-r).

    The max runs over the sample set, so this lower-bounds the true
    supremum and is exact whenever the supremum is attained on a sample.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    x = np.asarray(x, dtype=float).reshape(-1)
    d = np.linalg.norm(df.points - x, axis=1)
    return float(np.max(df.values * (1.0 + d / df.values) ** (-r)))


def majorant_many(df: DensityField, xs, r: float) -> np.ndarray:
    """Vectorized :func:`majorant` over rows of xs."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    out = np.empty(xs.shape[0])
    for i, x in enumerate(xs):
        out[i] = majorant(df, x, r)
    return out


def _chunked_pair_extremum(df: DensityField, ratio_fn, reduce_fn, chunk: int = 512):
    """Extremum of ratio_fn(rho_x, dist, rho_other) over all ordered sample pairs.

    Reduction order is fixed (row-major chunks) for bit-reproducibility.
    """
    pts, vals = df.points, df.values
    best = None
    for start in range(0, len(vals), chunk):
        px = pts[start:start + chunk]
        vx = vals[start:start + chunk][:, None]
        d = cdist(px, pts)
        block = ratio_fn(vx, d, vals[None, :])
        b = reduce_fn(block)
        best = b if best is None else reduce_fn(np.array([best, b]))
    return float(best)


def certify_slow_growth(df: DensityField, epsilon: float) -> float:
    """Smallest constant C_sg putting the samples in the slow-growth class.

    Returns the max over ordered pairs (x, alpha) of
    ``rho(alpha) / [rho(x) (1 + |x-alpha|/rho(x))^(1-epsilon)]``.
    The diagonal pair contributes exactly 1, so the result is >= 1.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return _chunked_pair_extremum(
        df,
        lambda vx, d, va: va / (vx * (1.0 + d / vx) ** (1.0 - epsilon)),
        np.max,
    )


def certify_self_majorization(df: DensityField, r: float) -> float:
    """Largest constant C_sm for which the samples are self-majorizing.

    Returns the min over ordered pairs (x, y) of
    ``rho(y) / [rho(x) (1 + |x-y|/rho(x))^(-r)]``; always <= 1 because the
    diagonal pair contributes exactly 1.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    return _chunked_pair_extremum(
        df,
        lambda vx, d, vy: vy / (vx * (1.0 + d / vx) ** (-r)),
        np.min,
    )


def lemma_transfer_sm_to_sg(c_sm: float, r: float) -> tuple[float, float]:
    """Slow-growth constants implied by self-majorization of order r.

    Returns ``(epsilon, C_sg)`` with epsilon = 1/(r+1) and
    C_sg = max(2^r / C_sm, (2^r / C_sm)^(1/(1+r))).
    """
    if not c_sm > 0:
        raise ValueError("c_sm must be positive")
    if not r > 0:
        raise ValueError("r must be positive")
    base = 2.0**r / c_sm
    return 1.0 / (r + 1.0), max(base, base ** (1.0 / (1.0 + r)))


def lemma_transfer_sg_to_sm(c_sg: float, epsilon: float) -> tuple[float, float]:
    """Self-majorization constants implied by (1 - epsilon) slow growth.

    Returns ``(r, C_sm)`` with r = (1-epsilon)/epsilon and
    C_sm = min(2^(epsilon-1) / C_sg, (2^(epsilon-1) / C_sg)^(1/epsilon)).
    """
    if not c_sg >= 1:
        raise ValueError("c_sg must be >= 1")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    base = 2.0 ** (epsilon - 1.0) / c_sg
    return (1.0 - epsilon) / epsilon, min(base, base ** (1.0 / epsilon))


def validate_theorem1_params(k: int, d: int, degree: int, epsilon: float) -> list[str]:
    """Check the parameter constraints of the pointwise convergence theorem.

    Requires degree > 2k - d + 1 and epsilon > 2k / degree.  Returns the
    list of violated conditions (empty = ok).
    """
    if k < 1 or d < 1 or 2 * k <= d:
        raise ValueError("need k >= 1, d >= 1 and 2k > d")
    violations = []
    if not degree > 2 * k - d + 1:
        violations.append(f"degree {degree} must exceed 2k-d+1 = {2 * k - d + 1}")
    if not epsilon > 2 * k / degree:
        violations.append(f"epsilon {epsilon:g} must exceed 2k/degree = {2 * k / degree:g}")
    return violations
