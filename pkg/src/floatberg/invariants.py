"""Dimensional constants, the theta invariant, and inequality checks.

For small delta the floating body D_delta is sandwiched between two
Bergman sublevel sets,

    {K_D < l_n / delta^2}  subset  D_delta  subset  {K_D < u_n / delta^2}.

Because log K_D is convex, the sharpest such constants for a given body
are the extrema of delta^2 K_D over the boundary of D_delta.  That
boundary is sampled by the section barycenters, so

    L(delta) = delta^2 min_k K_D(b_k),    U(delta) = delta^2 max_k K_D(b_k),

and l_D, u_D are the limits of L and U as delta -> 0; theta_D = l_D / u_D.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .bergman import QuadratureConfig, kernel, kernel_bounds, kernel_many
from .convex_body import (Body, Ellipsoid, affine_image, as_direction, contains, cut_depth,
                          is_symmetric, normalize, polar, support, uniform_directions,
                          unit_ball_volume, volume)
from .errors import NotSymmetric
from .floating_body import build, member, radial_gap
from .oracle import sample_body

__all__ = ["DimensionalConstants", "constants", "ThetaReport", "theta_estimate",
           "fit_limit", "sandwich_check", "blocki_consequence_check", "nazarov_check",
           "santalo_product", "scwe_limit_check", "hormander_limit_check",
           "affine_invariance_check", "ellipsoid_curvature"]


def _ball_volume0(n: int) -> float:
    # omega_0 = 1 (a point), needed by a_1
    return 1.0 if n == 0 else unit_ball_volume(n)


@dataclass(frozen=True)
class DimensionalConstants:
    """Sandwich constants and the strongly convex limit in dimension n.

    Attributes
    ----------
    n : int
    ell : float
        Lower constant ``4^-(n+1)``.
    u : float
        Upper constant ``n! n^(2n) omega_n^2 / pi^n``.
    a : float
        Limit of delta^2 K_D at the floating-body boundary of a body with
        positive curvature, ``n! 2^(n+1) / (4 pi)^n (omega_(n-1) / (n+1))^2``.
    theta_lower : float
        ``ell / u``, a lower bound for theta_D.
    """
    n: int
    ell: float
    u: float
    a: float
    theta_lower: float


def constants(n: int) -> DimensionalConstants:
    if not 1 <= n <= 3:
        raise ValueError(f"constants are tabulated for 1 <= n <= 3, got {n}")
    fact = math.factorial(n)
    wn = unit_ball_volume(n)
    ell = 4.0 ** -(n + 1)
    u = fact * n ** (2 * n) * wn ** 2 / math.pi ** n
    a = fact * 2.0 ** (n + 1) / (4 * math.pi) ** n * (_ball_volume0(n - 1) / (n + 1)) ** 2
    theta_lower = math.pi ** n / (fact * n ** (2 * n) * 4.0 ** (n + 1) * wn ** 2)
    return DimensionalConstants(n, ell, u, a, theta_lower)


# ------------------------------------------------------------ theta

def fit_limit(deltas, values):
    """Fit ``values = lim + c delta^alpha`` with alpha in [0.5, 2].

    Uses the last three grid points (least squares in (lim, c) for each
    alpha, alpha chosen to minimise the residual).  With fewer than three
    points the last value is returned with ``alpha = nan``.

    Returns
    -------
    (lim, c, alpha)
    """
    d = np.asarray(deltas, dtype=float)[-3:]
    y = np.asarray(values, dtype=float)[-3:]
    if len(d) < 3:
        return float(y[-1]), 0.0, float("nan")

    def solve(alpha):
        A = np.column_stack([np.ones_like(d), d ** alpha])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        return coef, float(np.sum((A @ coef - y) ** 2))

    res = minimize_scalar(lambda a: solve(a)[1], bounds=(0.5, 2.0), method="bounded",
                          options={"xatol": 1e-10})
    alpha = float(res.x)
    (lim, c), _ = solve(alpha)
    return float(lim), float(c), alpha


def _dedupe(P, tol=1e-12):
    keep = [0]
    for i in range(1, len(P)):
        if np.max(np.abs(P[i] - P[keep[-1]])) > tol:
            keep.append(i)
    if len(keep) > 1 and np.max(np.abs(P[keep[-1]] - P[0])) <= tol:
        keep.pop()
    return P[keep]


@dataclass
class ThetaReport:
    """Boundary extrema of delta^2 K_D and their extrapolated limits.

    Attributes
    ----------
    deltas : ndarray
        The grid, descending.
    L, U : ndarray
        Per-delta min and max of delta^2 K_D over the boundary samples.
    theta : ndarray
        Per-delta ratio L / U.
    ell_hat, u_hat, theta_hat : float
        Extrapolated limits; ``theta_hat = ell_hat / u_hat``.
    ell_fit, u_fit : tuple
        ``(lim, c, alpha)`` of each fit.
    band : float
        Combined quadrature and extrapolation uncertainty of theta_hat.
    points : ndarray
        Number of distinct boundary samples per delta.
    flagged : ndarray
        Number of samples per delta whose kernel failed to converge; these
        are excluded from the extrema.
    rel_error : ndarray
        Worst relative kernel error among the kept samples, per delta.
    """
    deltas: np.ndarray
    L: np.ndarray
    U: np.ndarray
    theta: np.ndarray
    ell_hat: float
    u_hat: float
    theta_hat: float
    ell_fit: tuple
    u_fit: tuple
    band: float
    points: np.ndarray
    flagged: np.ndarray
    rel_error: np.ndarray

    @property
    def ok(self) -> bool:
        """False if more than 1% of the samples at any delta were flagged."""
        return bool(np.all(self.flagged <= 0.01 * self.points))


def theta_estimate(body: Body, deltas, directions=None, cfg: QuadratureConfig | None = None,
                   workers: int = 1) -> ThetaReport:
    """Estimate l_D, u_D and theta_D from boundary extrema over a delta grid."""
    cfg = cfg or QuadratureConfig()
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or len(deltas) == 0 or np.any(np.diff(deltas) >= 0):
        raise ValueError("deltas must be a nonempty strictly descending sequence")
    L, U, pts, flagged, relerr = [], [], [], [], []
    for delta in deltas:
        B = _dedupe(build(body, delta, directions).barycenters)
        kv = kernel_many(body, B, cfg, workers)
        good = np.array([k.converged for k in kv])
        vals = np.array([k.value for k in kv])[good]
        errs = np.array([k.error for k in kv])[good]
        L.append(delta ** 2 * vals.min())
        U.append(delta ** 2 * vals.max())
        pts.append(len(B))
        flagged.append(int((~good).sum()))
        relerr.append(float(np.max(errs / vals)))
    L, U = np.array(L), np.array(U)
    ell_fit = fit_limit(deltas, L)
    u_fit = fit_limit(deltas, U)
    theta_hat = ell_fit[0] / u_fit[0]
    band = abs(theta_hat - L[-1] / U[-1]) + 4 * max(relerr)
    return ThetaReport(deltas, L, U, L / U, ell_fit[0], u_fit[0], theta_hat, ell_fit, u_fit,
                       band, np.array(pts), np.array(flagged), np.array(relerr))


# ------------------------------------------------------------ sandwich

def _bounds(body, X):
    if body.dim == 2:
        return kernel_bounds(body, X)
    return np.zeros(len(X)), np.full(len(X), np.inf)


def _refine(body, X, lower, upper, need, cfg, workers):
    """Replace bounds by quadrature value -/+ error where ``need`` holds."""
    lower, upper = lower.copy(), upper.copy()
    idx = np.flatnonzero(need)
    for i, kv in zip(idx, kernel_many(body, X[idx], cfg, workers)):
        lower[i] = kv.value - kv.error
        upper[i] = kv.value + kv.error
    return lower, upper, len(idx)


@dataclass
class SandwichReport:
    """Outcome of the sampled sandwich test at one delta.

    ``violations_lower`` counts samples with K_D < l_n/delta^2 that are not
    floating-body members; ``violations_upper`` counts members with
    K_D >= u_n/delta^2.  The boundary extrema L, U are bracketed by
    ``L_range`` and ``U_range``.  Margins are ratios to the thresholds;
    values above 1 (lower) and below 1 (upper) mean the inequality holds.
    """
    delta: float
    samples: int
    members: int
    violations_lower: int
    violations_upper: int
    indeterminate: int
    margin_lower: float
    margin_upper: float
    L_range: tuple
    U_range: tuple
    ell: float
    u: float
    quadrature_calls: int

    @property
    def ok(self) -> bool:
        return (self.violations_lower == 0 and self.violations_upper == 0
                and self.indeterminate == 0 and self.L_range[0] >= self.ell
                and self.U_range[1] <= self.u)


def _boundary_extrema(body, B, delta, cfg, ell, u, workers):
    """Brackets of L and U sufficient to decide L >= ell and U <= u."""
    t = delta ** 2
    lo, hi = _bounds(body, B)
    need = (t * lo < ell) | (t * hi > u)
    lo, hi, calls = _refine(body, B, lo, hi, need, cfg, workers)
    return (t * lo.min(), t * hi.min()), (t * lo.max(), t * hi.max()), calls


def sandwich_check(body: Body, delta: float, directions=None,
                   cfg: QuadratureConfig | None = None, samples: int = 10_000, seed: int = 0,
                   workers: int = 1) -> SandwichReport:
    """Sampled test of the sandwich with the dimensional constants.

    Certified kernel bounds decide most samples; quadrature is used only
    where the bounds are inconclusive.
    """
    cfg = cfg or QuadratureConfig()
    c = constants(body.dim)
    fba = build(body, delta, directions)
    thr_l, thr_u = c.ell / delta ** 2, c.u / delta ** 2
    X = sample_body(body, samples, seed)
    inside = member(fba, X)
    lo, hi = _bounds(body, X)
    need = (~inside & (lo < thr_l)) | (inside & (hi >= thr_u))
    lo, hi, calls = _refine(body, X, lo, hi, need, cfg, workers)
    out = ~inside
    viol_l = int(np.sum(out & (hi < thr_l)))
    viol_u = int(np.sum(inside & (lo >= thr_u)))
    indet = int(np.sum(out & (lo < thr_l) & (hi >= thr_l))
                + np.sum(inside & (lo < thr_u) & (hi >= thr_u)))
    margin_l = float(np.min(lo[out]) / thr_l) if out.any() else math.inf
    margin_u = float(np.max(hi[inside]) / thr_u) if inside.any() else 0.0
    Lr, Ur, bcalls = _boundary_extrema(body, _dedupe(fba.barycenters), delta, cfg,
                                       c.ell, c.u, workers)
    return SandwichReport(float(delta), len(X), int(inside.sum()), viol_l, viol_u, indet,
                          margin_l, margin_u, Lr, Ur, c.ell, c.u, calls + bcalls)


@dataclass
class BlockiReport:
    """delta^2 K_D at boundary barycenters against the lower constant."""
    delta: float
    points: int
    min_lower: float
    threshold: float
    quadrature_calls: int

    @property
    def ok(self) -> bool:
        return self.min_lower >= self.threshold


def blocki_consequence_check(body: Body, delta: float, directions=None,
                             cfg: QuadratureConfig | None = None, exact: bool = False,
                             workers: int = 1) -> BlockiReport:
    """Check delta^2 K_D(b) >= 4^-(n+1) at every section barycenter b.

    ``min_lower`` is a certified lower bound of the minimum (a kernel
    bound or a quadrature value minus its error).  With ``exact`` every
    point is evaluated by quadrature, so ``min_lower`` is the computed
    minimum itself.
    """
    cfg = cfg or QuadratureConfig()
    ell = constants(body.dim).ell
    B = _dedupe(build(body, delta, directions).barycenters)
    lo, hi = _bounds(body, B)
    need = np.ones(len(B), bool) if exact else delta ** 2 * lo < ell
    lo, _, calls = _refine(body, B, lo, hi, need, cfg, workers)
    return BlockiReport(float(delta), len(B), float(delta ** 2 * lo.min()), ell, calls)


# ------------------------------------------------------------ Nazarov, Santalo

def _require_symmetric(E):
    if not is_symmetric(E):
        raise NotSymmetric("body must be symmetric about the origin")


def santalo_product(E: Body) -> float:
    """vol(E) vol(E polar) for an origin-symmetric body."""
    _require_symmetric(E)
    return volume(E) * volume(polar(E))


@dataclass
class NazarovReport:
    kernel_at_origin: float
    error: float
    bound: float
    ratio: float
    santalo: float
    santalo_bound: float

    @property
    def ok(self) -> bool:
        return (self.ratio - self.error / self.bound <= 1.0
                and self.santalo <= self.santalo_bound * (1 + 1e-9))


def nazarov_check(E: Body, cfg: QuadratureConfig | None = None) -> NazarovReport:
    """Compare K_E(0) with n! vol(E polar) / (pi^n vol(E)).

    The ratio of the two must not exceed 1.  The Blaschke-Santalo product
    is reported alongside.
    """
    _require_symmetric(E)
    n = E.dim
    kv = kernel(E, np.zeros(n), cfg)
    vE, vP = volume(E), volume(polar(E))
    bound = math.factorial(n) * vP / (math.pi ** n * vE)
    return NazarovReport(kv.value, kv.error, bound, kv.value / bound, vE * vP,
                         unit_ball_volume(n) ** 2)


# ------------------------------------------------------------ strongly convex limits

def ellipsoid_curvature(E: Ellipsoid, normal) -> tuple[np.ndarray, float]:
    """Boundary point with outer unit normal ``normal`` and its Gauss curvature."""
    N = as_direction(normal)
    AAt = E.shape @ E.shape.T
    y = AAt @ N / math.sqrt(N @ AAt @ N)
    Q = np.linalg.inv(AAt)
    kappa = np.linalg.det(Q) / np.linalg.norm(Q @ y) ** (E.dim + 1)
    return E.center + y, float(kappa)


@dataclass
class LimitReport:
    """A sequence approaching a target; ``gaps`` are relative."""
    name: str
    parameters: np.ndarray
    values: np.ndarray
    target: float
    errors: np.ndarray = field(default=None)

    @property
    def gaps(self) -> np.ndarray:
        return np.abs(self.values - self.target) / self.target

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.gaps) < 0))


def scwe_limit_check(body: Ellipsoid, deltas, normal=None) -> LimitReport:
    """Cap width Delta^(n+1) / delta^2 against its small-cap limit.

    Delta is the depth of the cap of volume delta with outer normal N.
    The limit is ``2^-(n+1) ((n+1) / omega_(n-1))^2 kappa`` where kappa is
    the Gauss curvature at the boundary point with normal N.
    """
    if not isinstance(body, Ellipsoid):
        raise TypeError("curvature is available for ellipsoids only")
    n = body.dim
    N = np.eye(n)[0] if normal is None else as_direction(normal)
    _, kappa = ellipsoid_curvature(body, N)
    target = 2.0 ** -(n + 1) * ((n + 1) / _ball_volume0(n - 1)) ** 2 * kappa
    deltas = np.asarray(deltas, dtype=float)
    h = support(body, N)
    vals = np.array([(h - cut_depth(body, N, d)) ** (n + 1) / d ** 2 for d in deltas])
    return LimitReport("scwe", deltas, vals, target)


def hormander_limit_check(body: Ellipsoid, distances=(0.05, 0.02, 0.01), normal=None,
                          cfg: QuadratureConfig | None = None) -> LimitReport:
    """dist(x, boundary)^(n+1) K_D(x) approaching n!/(4 pi)^n kappa(x0).

    Points are x = x0 - d N on the inner normal through the boundary point
    x0 with outer normal N.  Unconverged kernels are kept in the report with
    their achieved error rather than raised.
    """
    if not isinstance(body, Ellipsoid):
        raise TypeError("curvature is available for ellipsoids only")
    n = body.dim
    N = np.eye(n)[0] if normal is None else as_direction(normal)
    x0, kappa = ellipsoid_curvature(body, N)
    target = math.factorial(n) / (4 * math.pi) ** n * kappa
    d = np.asarray(distances, dtype=float)
    kv = [kernel(body, x0 - di * N, cfg, strict=False) for di in d]
    vals = np.array([di ** (n + 1) * k.value for di, k in zip(d, kv)])
    errs = np.array([di ** (n + 1) * k.error for di, k in zip(d, kv)])
    return LimitReport("hormander", d, vals, target, errs)


# ------------------------------------------------------------ affine invariance

@dataclass
class AffineReport:
    kernel_points: int
    kernel_max_rel_dev: float
    kernel_tol: float
    radial_gap: float
    gap_tol: float
    membership_points: int
    membership_mismatches: int

    @property
    def ok(self) -> bool:
        return (self.kernel_max_rel_dev <= self.kernel_tol and self.radial_gap <= self.gap_tol
                and self.membership_mismatches == 0)


def affine_invariance_check(body: Body, A, b=None, delta: float = 0.01, directions=None,
                            cfg: QuadratureConfig | None = None, points: int = 10,
                            seed: int = 0, gap_tol: float = 1e-5,
                            collar: float = 1e-5) -> AffineReport:
    """Check both transformation laws of x -> A x + b.

    * Kernel: ``K_{A(D)}(A x + b) |det A|^2 = K_D(x)`` at ``points`` random
      interior points, relative deviation within 5 rel_tol.
    * Floating body: the floating body of A(D) at |det A| delta, built on
      the directions ``A^-T v`` (renormalised), pulled back by the map,
      against the one of D at delta: radial gap from the centroid of the
      barycenters, and membership on a 200x200 grid (planar bodies) off a
      boundary collar.
    """
    cfg = cfg or QuadratureConfig()
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = body.dim
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    det = abs(np.linalg.det(A))
    image = affine_image(body, A, b)

    X = sample_body(body, points, seed)
    dev = 0.0
    for x in X:
        k0 = kernel(body, x, cfg).value
        k1 = kernel(image, A @ x + b, cfg).value
        dev = max(dev, abs(k1 * det ** 2 / k0 - 1.0))

    fba = build(body, delta, directions)
    W = normalize(fba.directions @ np.linalg.inv(A))
    fimg = build(image, det * delta, W)
    pulled = lambda p: member(fimg, A @ p + b)
    center = fba.barycenters.mean(axis=0)
    gap = radial_gap(fba, pulled, center, uniform_directions(n, 360))

    mismatches, total = 0, 0
    if n == 2:
        E = np.eye(2)
        lo = -np.array([support(body, -e) for e in E])
        hi = np.array([support(body, e) for e in E])
        g = [np.linspace(lo[i], hi[i], 202)[1:-1] for i in range(2)]
        G = np.stack(np.meshgrid(*g, indexing="ij"), axis=-1).reshape(-1, 2)
        G = G[contains(body, G)]
        m0 = member(fba, G)
        m1 = member(fimg, G @ A.T + b)
        # distance to the nearest cut of either family, measured in D
        d0 = np.min(np.abs(fba.offsets - G @ fba.directions.T), axis=1)
        Y = G @ A.T + b
        scale = np.linalg.norm(W @ A, axis=1)
        d1 = np.min(np.abs(fimg.offsets - Y @ fimg.directions.T) / scale, axis=1)
        off = (d0 > collar) & (d1 > collar)
        total = int(off.sum())
        mismatches = int(np.sum(off & (m0 != m1)))
    return AffineReport(len(X), dev, 5 * cfg.rel_tol, gap, gap_tol, total, mismatches)
