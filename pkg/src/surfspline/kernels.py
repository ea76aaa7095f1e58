"""Polyharmonic kernels, radial test bumps, and the local kernel error.

The kernel is ``phi(x) = |x|^(2k-d)`` for odd d and ``|x|^(2k-d) log|x|``
for even d, the fundamental solution of the k-fold Laplacian up to the
normalization constant ``c_{d,k}`` carried explicitly here.  Test functions
are compactly supported radial polynomial bumps ``(1 - (r/scale)^2)^p`` whose
iterated Laplacians are available in closed form, which removes one source of
error from rate studies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np

from .centers import CenterSet
from .polyrep import PolyRep

#: Supported ambient dimensions at desk scale.
SUPPORTED_DIMS = (1, 2, 3)
MAX_ORDER = 4


def _check_dk(d: int, k: int) -> None:
    if d not in SUPPORTED_DIMS or not (2 * k > d) or k > MAX_ORDER:
        raise ValueError(f"unsupported (d, k) = ({d}, {k}); need d in {SUPPORTED_DIMS}, d/2 < k <= {MAX_ORDER}")


@dataclass(frozen=True)
class KernelParams:
    """Kernel order, ambient dimension, decay exponent and normalization.

    ``nu = degree + d - 2k`` is the far-field decay exponent of the local
    kernel-approximation error for reproductions of precision ``degree``.
    """

    d: int
    k: int
    degree: int
    nu: float = field(init=False)
    normalization: float = field(init=False)

    def __post_init__(self):
        _check_dk(self.d, self.k)
        object.__setattr__(self, "nu", float(self.degree + self.d - 2 * self.k))
        object.__setattr__(self, "normalization", fundamental_normalization(self.d, self.k))


def phi_radial(r, d: int, k: int):
    """Kernel profile as a function of the radius; phi(0) = 0 by continuity."""
    _check_dk(d, k)
    r = np.asarray(r, dtype=float)
    p = 2 * k - d
    if d % 2 == 1:
        out = r**p
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(r > 0, r**p * np.log(np.where(r > 0, r, 1.0)), 0.0)
    return out if out.ndim else float(out)


def phi(x, params: KernelParams) -> float:
    """Kernel value at the point x (not normalized by c_{d,k})."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != params.d:
        raise ValueError(f"point has dimension {x.shape[0]}, kernel expects {params.d}")
    return float(phi_radial(np.linalg.norm(x), params.d, params.k))


def fundamental_normalization(d: int, k: int) -> float:
    """Constant c with  Delta^k (c * phi) = delta  in the distributional sense.

    Derived by peeling Laplacians off the radial power until the classical
    fundamental solution of the single Laplacian remains:
    Delta |x|^s = s (s + d - 2) |x|^(s-2).
    """
    _check_dk(d, k)
    if d == 1:
        # Delta^{k-1} |x|^{2k-1} = (2k-1)! |x|;  (|x|/2)'' = delta
        prod = 1.0
        for m in range(2, k + 1):
            prod *= (2 * m - 1) * (2 * m - 2)
        return 1.0 / (2.0 * prod)
    if d == 3:
        # Delta^{k-1} |x|^{2k-3} -> |x|^{-1};  -1/(4 pi |x|) is fundamental
        prod = 1.0
        for m in range(2, k + 1):
            prod *= (2 * m - 3) * (2 * m - 2)
        return -1.0 / (4.0 * pi * prod)
    # d == 2:  Delta^{k-1} (|x|^{2k-2} log|x|) = (2^{k-1} (k-1)!)^2 log|x| + poly,
    # and (1/2pi) log|x| is fundamental for the Laplacian.
    prod = 1.0
    for m in range(1, k):
        prod *= (2 * m) * (2 * m)
    return 1.0 / (2.0 * pi * prod)


def surface_area(d: int) -> float:
    """Surface area of the unit sphere in R^d."""
    return 2.0 * pi ** (d / 2.0) / gamma(d / 2.0)


@dataclass(frozen=True)
class RadialBump:
    """A compactly supported radial polynomial around ``center``.

    ``coeffs[m]`` multiplies ``(r^2)^m`` on ``r <= scale``; the function is
    zero outside.  ``exponent`` records the vanishing order at the support
    boundary (p for a fresh bump, p - k after k Laplacians), which is what
    controls smoothness across the boundary.
    """

    exponent: int
    center: np.ndarray
    scale: float
    coeffs: np.ndarray

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = np.atleast_2d(x)
        t = np.sum((pts - self.center) ** 2, axis=1)
        inside = t <= self.scale**2
        vals = np.zeros(pts.shape[0])
        if np.any(inside):
            vals[inside] = np.polynomial.polynomial.polyval(t[inside], self.coeffs)
        return float(vals[0]) if single else vals

    def sup_norm(self) -> float:
        """Max of |values| over the support: dense radial grid plus the
        critical points of the polynomial in t = r^2."""
        tmax = self.scale**2
        ts = np.linspace(0.0, tmax, 10_001)
        best = float(np.max(np.abs(np.polynomial.polynomial.polyval(ts, self.coeffs))))
        deriv = np.polynomial.polynomial.polyder(self.coeffs)
        if deriv.size:
            roots = np.polynomial.polynomial.polyroots(deriv)
            real = roots[np.abs(roots.imag) < 1e-10].real
            real = real[(real >= 0) & (real <= tmax)]
            if real.size:
                best = max(best, float(np.max(np.abs(
                    np.polynomial.polynomial.polyval(real, self.coeffs)))))
        return best


def bump(p: int, center, scale: float) -> RadialBump:
    """The bump (1 - (r/scale)^2)^p around ``center``; C^(p-1) at the boundary."""
    if p < 2:
        raise ValueError("exponent must be >= 2")
    if not scale > 0:
        raise ValueError("scale must be positive")
    center = np.asarray(center, dtype=float).reshape(-1)
    # binomial expansion in t = r^2
    m = np.arange(p + 1)
    from math import comb

    coeffs = np.array([comb(p, int(mm)) * (-1.0) ** mm * scale ** (-2.0 * mm) for mm in m])
    return RadialBump(exponent=p, center=center, scale=float(scale), coeffs=coeffs)


def laplacian_power(f: RadialBump, k: int) -> RadialBump:
    """Apply the radial Laplacian k times, termwise on the polynomial in r^2.

    Uses ``Delta r^(2m) = 2m (2m + d - 2) r^(2m-2)`` in the ambient dimension
    of the bump's center.  Requires boundary vanishing order >= 2k + 2 so the
    result is still continuously differentiable across the support boundary
    (each Laplacian costs one order).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if f.exponent < 2 * k + 2:
        raise ValueError(f"bump boundary order {f.exponent} too small for Delta^{k} (need >= {2 * k + 2})")
    d = f.dim
    coeffs = f.coeffs.copy()
    for _ in range(k):
        if coeffs.size <= 1:
            coeffs = np.zeros(1)
            break
        m = np.arange(1, coeffs.size)
        coeffs = coeffs[1:] * (2 * m) * (2 * m + d - 2)
    return RadialBump(exponent=f.exponent - k, center=f.center, scale=f.scale, coeffs=coeffs)


def local_kernel_error(pr: PolyRep, cs: CenterSet, x, params: KernelParams) -> tuple[float, float]:
    """Error of replacing phi(x - alpha) by the reproduction's combination.

    Returns ``(error, normalized)`` where ``normalized`` divides by the decay
    profile ``rho^(2k-d) (1 + |x-alpha|/rho)^(-nu)``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    target = phi(x - pr.alpha, params)
    shifts = phi_radial(np.linalg.norm(x - cs.points[pr.indices], axis=1), params.d, params.k)
    err = abs(target - float(pr.weights @ shifts))
    rho = pr.radius
    profile = rho ** (2 * params.k - params.d) * (1.0 + np.linalg.norm(x - pr.alpha) / rho) ** (-params.nu)
    return err, err / profile


def local_kernel_error_precise(pr: PolyRep, cs: CenterSet, x, params: KernelParams,
                               weights=None, dps: int = 60) -> tuple[float, float]:
    """Extended-precision variant of :func:`local_kernel_error`.

    The direct float64 difference bottoms out near ``eps * |phi|`` long
    before the true far-field error does, so decay studies past a few
    support radii need both refined weights (see
    :func:`surfspline.polyrep.refine_weights`) and high-precision kernel
    sums.  ``weights`` accepts a pre-refined mpmath weight list.
    """
    import mpmath as mp

    x = np.asarray(x, dtype=float).reshape(-1)
    two_k_d = 2 * params.k - params.d

    with mp.workdps(dps):
        xm = [mp.mpf(v) for v in x]

        def phimp_at(point):
            # subtract in extended precision: float64 differencing of O(|x|)
            # coordinates injects ~1e-16 relative noise, far above the true
            # far-field error
            r2 = mp.fsum((a - mp.mpf(b)) ** 2 for a, b in zip(xm, point))
            if r2 == 0:
                return mp.mpf(0)
            r = mp.sqrt(r2)
            val = r**two_k_d
            if params.d % 2 == 0:
                val *= mp.log(r)
            return val

        if weights is None:
            weights = [mp.mpf(w) for w in pr.weights]
        target = phimp_at(pr.alpha)
        total = mp.fsum(w * phimp_at(cs.points[i]) for w, i in zip(weights, pr.indices))
        err = abs(target - total)
        rho = mp.mpf(pr.radius)
        profile = rho**two_k_d * (1 + mp.norm(mp.matrix((x - pr.alpha).tolist())) / rho) ** (-params.nu)
        return float(err), float(err / profile)
