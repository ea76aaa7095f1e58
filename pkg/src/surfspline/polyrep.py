"""Stable local polynomial reproductions.

Given a center set, a base point ``alpha``, a support radius and a total
degree, we look for weights ``a(xi, alpha)`` supported on the centers inside
``B(alpha, radius)`` that reproduce every polynomial of total degree at most
``degree`` exactly:

    sum_xi a(xi, alpha) p(xi) = p(alpha).

Among all weight vectors satisfying these moment constraints we return the
one of minimum Euclidean norm, computed with a rank-revealing least-squares
factorization on a shifted-and-scaled monomial basis (shifting to ``alpha``
and scaling by the radius keeps the conditioning independent of location and
scale).  The sum of absolute weights is the stability norm of the
reproduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.linalg

from .centers import CenterSet

#: Relative rank tolerance (w.r.t. the largest singular value) separating
#: genuine unisolvency failures from round-off.
RANK_RTOL = 1e-10


class ReproductionError(Exception):
    """Base class for local-reproduction construction failures."""


class InsufficientPoints(ReproductionError):
    """Fewer neighbors inside the support ball than polynomial-space dimension."""


class RankDeficient(ReproductionError):
    """Neighbors inside the support ball are not unisolvent for the degree."""


def polynomial_dim(dim: int, degree: int) -> int:
    """Dimension of the space of polynomials of total degree <= degree in R^dim."""
    return comb(degree + dim, dim)


def monomial_exponents(dim: int, degree: int) -> np.ndarray:
    """Multi-indices of total degree <= degree, graded lexicographic, (M, dim).

    The zero multi-index always comes first; the ordering is deterministic.
    """
    if degree < 0 or dim < 1:
        raise ValueError("need degree >= 0 and dim >= 1")
    out = []

    def rec(prefix, remaining, budget):
        if remaining == 1:
            out.append(prefix + (budget,))
            return
        for e in range(budget + 1):
            rec(prefix + (e,), remaining - 1, budget - e)

    for total in range(degree + 1):
        rec((), dim, total)
    return np.array(out, dtype=int)


def _basis_matrix(expo: np.ndarray, scaled_pts: np.ndarray) -> np.ndarray:
    """Rows = monomials, columns = points; entries x^beta for scaled offsets."""
    # (M, n, d) -> (M, n); exponent 0 must yield 1 even at 0.
    return np.prod(scaled_pts[None, :, :] ** expo[:, None, :], axis=2)


@dataclass(frozen=True)
class PolyRep:
    """A local polynomial reproduction at a single base point.

    ``weights[i]`` is the coefficient attached to center ``indices[i]``; all
    weighted centers lie inside ``B(alpha, radius)``.
    """

    alpha: np.ndarray
    radius: float
    indices: np.ndarray
    weights: np.ndarray
    degree: int
    stability: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "stability", float(np.sum(np.abs(self.weights))))


def build_reproduction(cs: CenterSet, alpha, radius: float, degree: int) -> PolyRep:
    """Minimum-norm weights reproducing Pi_degree from centers in B(alpha, radius).

    Raises
    ------
    InsufficientPoints
        If the ball holds fewer centers than ``dim Pi_degree``.
    RankDeficient
        If the local Vandermonde has numerical rank below ``dim Pi_degree``
        at relative tolerance ``RANK_RTOL``.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    if degree < 0:
        raise ValueError("degree must be >= 0")
    alpha = cs._check_point(alpha)
    idx, _ = cs.neighbor_arrays(alpha, radius)
    m = polynomial_dim(cs.dim, degree)
    if idx.size < m:
        raise InsufficientPoints(
            f"{idx.size} centers in B(alpha, {radius:g}), need {m} for degree {degree}"
        )
    expo = monomial_exponents(cs.dim, degree)
    scaled = (cs.points[idx] - alpha) / radius
    bmat = _basis_matrix(expo, scaled)
    rhs = np.zeros(m)
    rhs[0] = 1.0  # p(alpha) in the shifted basis: 1 for the constant, 0 otherwise
    sol, _, rank, _ = scipy.linalg.lstsq(bmat, rhs, cond=RANK_RTOL, lapack_driver="gelsd")
    if rank < m:
        raise RankDeficient(f"local Vandermonde rank {rank} < {m}")
    return PolyRep(alpha=alpha, radius=float(radius), indices=idx, weights=sol, degree=degree)


def verify_reproduction(pr: PolyRep, cs: CenterSet) -> float:
    """Max residual of the moment constraints over the monomial test set.

    Evaluated in the same shifted-and-scaled basis used for construction, so
    the value is comparable across locations and scales.  The caller decides
    what tolerance to hold it to.
    """
    expo = monomial_exponents(cs.dim, pr.degree)
    scaled = (cs.points[pr.indices] - pr.alpha) / pr.radius
    bmat = _basis_matrix(expo, scaled)
    rhs = np.zeros(expo.shape[0])
    rhs[0] = 1.0
    return float(np.max(np.abs(bmat @ pr.weights - rhs)))


def stability_norm(pr: PolyRep) -> float:
    """Sum of absolute weights; >= 1 for any successful reproduction."""
    return float(np.sum(np.abs(pr.weights)))


def refine_weights(pr: PolyRep, cs: CenterSet, dps: int = 60):
    """Recompute the minimum-norm weights in extended precision.

    Double-precision weights satisfy the moment constraints only to roughly
    ``1e-14``; far-field decay measurements of the kernel error need
    residuals far below that (the true error is astronomically small at
    large distances).  This solves the min-norm system exactly via the
    normal equations in mpmath arithmetic and returns a list of
    ``mpmath.mpf`` weights aligned with ``pr.indices``.
    """
    import mpmath as mp

    expo = monomial_exponents(cs.dim, pr.degree)
    pts = cs.points[pr.indices]
    with mp.workdps(dps):
        # assemble the basis matrix in extended precision: float64 rounding
        # of the monomial entries alone would cap the achievable constraint
        # residual near 1e-16 and pollute far-field error measurements
        scaled = [[(mp.mpf(pts[i, a]) - mp.mpf(pr.alpha[a])) / mp.mpf(pr.radius)
                   for a in range(cs.dim)] for i in range(pts.shape[0])]
        bm = mp.matrix(expo.shape[0], pts.shape[0])
        for row, e in enumerate(expo):
            for col in range(pts.shape[0]):
                v = mp.mpf(1)
                for a in range(cs.dim):
                    if e[a]:
                        v *= scaled[col][a] ** int(e[a])
                bm[row, col] = v
        gram = bm * bm.T
        rhs = mp.matrix([mp.mpf(0)] * expo.shape[0])
        rhs[0] = mp.mpf(1)
        sol = bm.T * mp.lu_solve(gram, rhs)
        return [sol[i] for i in range(sol.rows)]
