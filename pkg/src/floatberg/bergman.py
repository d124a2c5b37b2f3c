"""Diagonal Bergman kernel K_D(x) = K_Omega(ix, ix) of the tube R^n + iD.

On the diagonal the kernel is

    K_D(x) = (2 pi)^-n  int_{R^n} exp(-2 x.t) / J_D(t) dt,

a positive integrand.  Boxes factorise into one-dimensional integrals.  Other
bodies are integrated in polar coordinates t = s w: for every direction w
the radial integrand decays like exp(-2 s g(w)) where

    g(w) = x.w + h_D(-w)

is the distance from x to the supporting hyperplane of D with outer
normal -w.  The radial integral runs over a fixed composite rule in the
scaled variable u = 2 s g(w), and the angular integral is adaptive with
its kinks (polytope facet normals) and peak (nearest supporting
hyperplane) as panel breakpoints.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .convex_body import (Body, Box, Ellipsoid, Polytope, Simplex, as_direction, contains,
                          exit_distance, normalize, support_many, uniform_directions)
from .errors import (IndeterminateAtTolerance, MBelowMinimum, PointOutsideBody,
                     QuadratureNotConverged)
from .laplace import scaled_laplace
from .quadrature import QuadratureConfig, adaptive_quad, composite_rule
from .tolerances import TOL

__all__ = ["QuadratureConfig", "KernelValue", "kernel", "kernel_square_reference",
           "kernel_interval_reference", "kernel_many", "kernel_box_reference", "sublevel_member",
           "sublevel_boundary", "kernel_min", "kernel_bounds"]


@dataclass(frozen=True)
class KernelValue:
    x: np.ndarray
    value: float
    error: float
    radius: float
    converged: bool = True


# ------------------------------------------------------- closed forms

def kernel_interval_reference(y, lo=0.0, hi=1.0):
    """pi / (4 L^2) csc^2(pi (y - lo) / L); zero outside the interval."""
    y = np.asarray(y, dtype=float)
    L = hi - lo
    s = (y - lo) / L
    inside = (s > 0) & (s < 1)
    val = np.pi / (4 * L * L) / np.sin(np.pi * np.where(inside, s, 0.5)) ** 2
    return np.where(inside, val, 0.0)


def kernel_box_reference(box: Box, x):
    x = np.asarray(x, dtype=float)
    out = np.ones(x.shape[:-1])
    for i in range(box.dim):
        out = out * kernel_interval_reference(x[..., i], box.lo[i], box.hi[i])
    return out


def kernel_square_reference(x):
    """Closed-form kernel of the unit square, (pi^2/16) csc^2(pi x) csc^2(pi y)."""
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise PointOutsideBody("point outside the open unit square")
    val = np.pi ** 2 / 16 / (np.sin(np.pi * x[..., 0]) * np.sin(np.pi * x[..., 1])) ** 2
    return float(val) if val.ndim == 0 else val


# ------------------------------------------------------- radial rules

@lru_cache(maxsize=None)
def _u_max(n: int, trunc_tol: float) -> float:
    """u beyond which u^(2n) e^-u is below trunc_tol times its peak."""
    p = 2 * n
    f = lambda u: p * math.log(u) - u - (math.log(trunc_tol) + p * math.log(p) - p)
    return brentq(f, p, 1e4)


@lru_cache(maxsize=None)
def _radial_rule(n: int, trunc_tol: float, refine: int = 0):
    """Nodes u and weights for int_0^umax F(u) du, graded for e^-u decay."""
    umax = _u_max(n, trunc_tol)
    lo_edges = np.linspace(math.log(1e-8), 0.0, 9)
    hi_edges = np.array([1.0, 2.5, 5.0, 8.0, 12.0, 17.0, 23.0, 30.0, 38.0, 47.0, 58.0, 70.0])
    hi_edges = np.append(hi_edges[hi_edges < umax], umax)
    k = 12 + 4 * refine
    tau, wt = composite_rule(lo_edges, k)
    u1 = np.exp(tau)
    w1 = wt * u1
    u2, w2 = composite_rule(hi_edges, 16 + 4 * refine)
    return np.concatenate([u1, u2]), np.concatenate([w1, w2]), umax


def _radial_integral(body, x, W, n, trunc_tol, refine=0):
    """R(w) = int_0^inf s^(n-1) exp(-2 s g(w)) / Jhat(s w) ds for rows w of W."""
    g = W @ x + support_many(body, -W)
    u, wu, _ = _radial_rule(n, trunc_tol, refine)
    s = u[None, :] / (2.0 * g[:, None])
    T = s[..., None] * W[:, None, :]
    jh = scaled_laplace(body, T)
    f = s ** (n - 1) * np.exp(-u)[None, :] / jh / (2.0 * g[:, None])
    return f @ wu


# ------------------------------------------------------- one dimension

def _interval_kernel(y, lo, hi, cfg: QuadratureConfig):
    """Kernel of the interval (lo, hi) at y by adaptive quadrature."""
    L = hi - lo
    umax = _u_max(1, cfg.trunc_tol)
    total, err = 0.0, 0.0
    for g in (y - lo, hi - y):
        # integrand in u = 2 s g:  e^-u / Jhat(s) / (2 g), Jhat(s) = int e^{-2 s (x-lo)}
        def f(u, g=g):
            s = u / (2.0 * g)
            x = 2.0 * s * L
            small = x < TOL.box_series
            safe = np.where(small, 1.0, x)
            fac = np.where(small, 1.0 - x / 2 + x * x / 6 - x ** 3 / 24, -np.expm1(-safe) / safe)
            return np.exp(-u) / (L * fac) / (2.0 * g)
        knee = min(2.0 * g / L, 1.0)
        bps = sorted({0.0, knee * 1e-3, knee * 1e-2, knee * 0.1, knee, 1.0, 4.0, 12.0, umax})
        res = adaptive_quad(f, bps, rel_tol=cfg.rel_tol / 4, nodes=cfg.nodes,
                            max_depth=cfg.max_subdivisions)
        if not res.converged:
            raise QuadratureNotConverged(res.value, res.error)
        total += res.value
        err += res.error
    scale = 1.0 / (2.0 * np.pi)
    return scale * total, scale * err, umax / (2.0 * min(y - lo, hi - y))


def _box_kernel(box: Box, x, cfg):
    val, rel, rad = 1.0, 0.0, 0.0
    for i in range(box.dim):
        k, e, r = _interval_kernel(x[i], box.lo[i], box.hi[i], cfg)
        val *= k
        rel += e / k
        rad = max(rad, r)
    return KernelValue(x, val, val * rel, rad)


def _as_interval(body):
    if isinstance(body, Box):
        return body.lo[0], body.hi[0]
    lo = -support_many(body, np.array([[-1.0]]))[0]
    hi = support_many(body, np.array([[1.0]]))[0]
    return lo, hi


# ------------------------------------------------------- general bodies

def _peak_direction(body, x, n):
    """Direction w minimising g(w) over a dense grid (the nearest face)."""
    W = uniform_directions(n, 720 if n == 2 else 4000)
    g = W @ x + support_many(body, -W)
    i = int(np.argmin(g))
    return W[i], float(g[i])


def _kernel_2d(body, x, cfg):
    angles = [0.0, 2 * np.pi]
    if not isinstance(body, Ellipsoid):
        N = body.as_polytope().normals
        angles += list(np.arctan2(-N[:, 1], -N[:, 0]))
    w0, _ = _peak_direction(body, x, 2)
    phi0 = math.atan2(w0[1], w0[0])
    if isinstance(body, Ellipsoid):
        # smooth peak: polish the grid argmin of g
        def gfun(p):
            w = np.array([[math.cos(p), math.sin(p)]])
            return float(w[0] @ x + support_many(body, -w)[0])
        phi0 = minimize_scalar(gfun, bounds=(phi0 - 0.01, phi0 + 0.01), method="bounded",
                               options={"xatol": 1e-12}).x
    angles.append(phi0)
    angles = np.unique(np.concatenate([np.mod(angles[2:], 2 * np.pi), [0.0, 2 * np.pi]]))

    def f(phi):
        W = np.column_stack([np.cos(phi), np.sin(phi)])
        return _radial_integral(body, x, W, 2, cfg.trunc_tol)

    res = adaptive_quad(f, angles, rel_tol=cfg.rel_tol / 2, nodes=cfg.nodes,
                        max_depth=cfg.max_subdivisions)
    scale = 1.0 / (2 * np.pi) ** 2
    value = scale * res.value
    probe = np.linspace(0, 2 * np.pi, 9)[:-1] + 0.1234
    probe = np.append(probe, phi0)
    Wp = np.column_stack([np.cos(probe), np.sin(probe)])
    a = _radial_integral(body, x, Wp, 2, cfg.trunc_tol)
    b = _radial_integral(body, x, Wp, 2, cfg.trunc_tol, refine=1)
    radial_rel = float(np.max(np.abs(a - b) / np.abs(b)))
    g = Wp @ x + support_many(body, -Wp)
    radius = _u_max(2, cfg.trunc_tol) / (2 * min(g.min(), _peak_direction(body, x, 2)[1]))
    return KernelValue(x, value, scale * res.error + radial_rel * value, float(radius),
                       res.converged)


def _frame(w):
    e1 = normalize(np.cross(w, [1.0, 0, 0]) if abs(w[0]) < 0.9 else np.cross(w, [0, 1.0, 0]))
    return e1, np.cross(w, e1)


def _kernel_3d(body, x, cfg):
    w0, gmin = _peak_direction(body, x, 3)
    e1, e2 = _frame(w0)
    # polar angle about the peak direction is adaptive; the azimuth uses a
    # fixed composite rule, checked against a finer one
    nodes = max(8, cfg.nodes // 2)

    def run(panels):
        phi, wphi = composite_rule(np.linspace(0, 2 * np.pi, panels + 1), nodes)
        ring = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2

        def f(thetas):
            st, ct = np.sin(thetas), np.cos(thetas)
            W = ct[:, None, None] * w0 + st[:, None, None] * ring[None]
            W = W.reshape(-1, 3)
            R = np.concatenate([_radial_integral(body, x, W[i:i + 512], 3, cfg.trunc_tol)
                                for i in range(0, len(W), 512)])
            return st * (R.reshape(thetas.size, phi.size) @ wphi)

        return adaptive_quad(f, [0.0, 0.3, np.pi / 2, np.pi], rel_tol=cfg.rel_tol / 2,
                             nodes=nodes, max_depth=cfg.max_subdivisions)

    coarse, fine = run(4), run(6)
    scale = 1.0 / (2 * np.pi) ** 3
    value = scale * fine.value
    err = scale * (fine.error + abs(fine.value - coarse.value))
    radius = _u_max(3, cfg.trunc_tol) / (2 * gmin)
    return KernelValue(x, value, err, radius, fine.converged and err <= cfg.rel_tol * value)


def kernel(body: Body, x, cfg: QuadratureConfig | None = None, strict: bool = True) -> KernelValue:
    """Bergman kernel of the tube over ``body`` at the purely imaginary point ix.

    Raises `PointOutsideBody` for x not interior.  With ``strict`` a failed
    convergence raises `QuadratureNotConverged`; otherwise the returned
    value carries ``converged=False`` and its achieved error.
    """
    cfg = cfg or QuadratureConfig()
    x = np.asarray(x, dtype=float)
    if x.shape != (body.dim,):
        raise ValueError(f"point must have shape ({body.dim},)")
    if not contains(body, x):
        raise PointOutsideBody(f"{x} is not interior to the body")
    n = body.dim
    if isinstance(body, Box):
        return _box_kernel(body, x, cfg)
    if n == 1:
        lo, hi = _as_interval(body)
        return _box_kernel(Box([lo], [hi]), x, cfg)
    if n == 2:
        kv = _kernel_2d(body, x, cfg)
    elif n == 3:
        kv = _kernel_3d(body, x, cfg)
    else:
        raise ValueError("kernel quadrature for non-box bodies needs n <= 3")
    if strict and (not kv.converged or kv.error > cfg.rel_tol * kv.value * 10):
        raise QuadratureNotConverged(kv.value, kv.error)
    return kv


def kernel_many(body: Body, X, cfg: QuadratureConfig | None = None, workers: int = 1):
    """Non-strict `kernel` at every row of X, in input order.

    ``workers > 1`` spreads the rows over a thread pool; results do not
    depend on the worker count.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    job = lambda x: kernel(body, x, cfg, strict=False)
    if workers <= 1 or len(X) < 2:
        return [job(x) for x in X]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, X))


# ------------------------------------------------------- sublevel sets

def sublevel_member(body: Body, x, M: float, cfg: QuadratureConfig | None = None) -> bool:
    """Is x in {K_D < M}?  Raises `IndeterminateAtTolerance` if the error band straddles M."""
    if M <= 0:
        raise ValueError("M must be positive")
    if not contains(body, x):
        return False
    kv = kernel(body, x, cfg)
    if kv.value + kv.error < M:
        return True
    if kv.value - kv.error >= M:
        return False
    raise IndeterminateAtTolerance(kv.value, kv.error, M)


def sublevel_boundary(body: Body, M: float, rays, cfg: QuadratureConfig | None = None,
                      center=None):
    """Points on {K_D = M}, one per ray from the kernel minimiser.

    Valid because sublevel sets are convex and contain the minimiser; each
    radius is bisected to `TOL.sublevel_radial`.
    """
    cfg = cfg or QuadratureConfig()
    if center is None:
        center, kmin = kernel_min(body, cfg)
    else:
        center = np.asarray(center, dtype=float)
        kmin = kernel(body, center, cfg).value
    if M <= kmin:
        raise MBelowMinimum(f"M={M} is not above the kernel minimum {kmin}")
    pts = []
    for u in np.atleast_2d(rays):
        u = as_direction(u)
        lo, hi = 0.0, exit_distance(body, center, u)
        while hi - lo > TOL.sublevel_radial:
            mid = 0.5 * (lo + hi)
            x = center + mid * u
            if not contains(body, x):
                hi = mid
                continue
            kv = kernel(body, x, cfg, strict=False)
            if kv.value < M:
                lo = mid
            else:
                hi = mid
        pts.append(center + 0.5 * (lo + hi) * u)
    return np.array(pts)


def _golden(f, a, b, tol):
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _interior_point(body):
    if isinstance(body, Box):
        return 0.5 * (body.lo + body.hi)
    if isinstance(body, Ellipsoid):
        return body.center.copy()
    return body.as_polytope().vertices.mean(axis=0)


def kernel_min(body: Body, cfg: QuadratureConfig | None = None, max_sweeps: int = 25):
    """Minimiser of K_D by coordinate-wise golden-section search on log K."""
    cfg = cfg or QuadratureConfig()
    x = _interior_point(body)
    n = body.dim
    logk = lambda p: math.log(kernel(body, p, cfg, strict=False).value)
    width = None
    for _ in range(max_sweeps):
        step = 0.0
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1.0
            lo = -exit_distance(body, x, -e)
            hi = exit_distance(body, x, e)
            pad = 1e-6 * (hi - lo)
            lo, hi = lo + pad, hi - pad
            if width is not None:
                lo, hi = max(lo, -width), min(hi, width)
            t = _golden(lambda s: logk(x + s * e), lo, hi, TOL.golden_step)
            x = x + t * e
            step = max(step, abs(t))
        if step < TOL.golden_step:
            break
        width = 4.0 * step
    return x, kernel(body, x, cfg).value


# ------------------------------------------------------- certified bounds

def _parallelogram_kernel(X, origin, E, half=0.5):
    """Kernel of origin + E (0, half)^2 at rows of X (0 outside)."""
    C = np.linalg.solve(E, (X - origin).T).T
    k = (kernel_interval_reference(C[:, 0], 0.0, half)
         * kernel_interval_reference(C[:, 1], 0.0, half))
    return k / np.linalg.det(E) ** 2


def _slab_pair_kernel(X, body, N):
    """Kernels of circumscribed parallelograms cut out by normal pairs N (p, 2, 2)."""
    best = np.zeros(len(X))
    for nu in N:
        if abs(np.linalg.det(nu)) < 1e-6:
            continue
        a = -support_many(body, -nu)
        b = support_many(body, nu)
        Y = X @ nu.T
        k = (kernel_interval_reference(Y[:, 0], a[0], b[0])
             * kernel_interval_reference(Y[:, 1], a[1], b[1])) * np.linalg.det(nu) ** 2
        best = np.maximum(best, k)
    return best


def kernel_bounds(body: Body, X):
    """Certified (lower, upper) bounds on K_D at rows of X, planar bodies only.

    Uses monotonicity of the Bergman kernel under inclusion together with
    the closed-form kernel of parallelograms (affine images of the square).
    The upper bound is ``inf`` where no inscribed parallelogram contains x.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if body.dim != 2:
        raise ValueError("kernel_bounds is implemented for n = 2")
    if isinstance(body, Box):
        k = kernel_box_reference(body, X)
        return k, k
    if isinstance(body, Ellipsoid):
        U = (X - body.center) @ body.inverse.T
        rho = np.linalg.norm(U, axis=1)
        det2 = body.abs_det ** 2
        lower = np.pi ** 2 / 256 / np.cos(np.pi * np.minimum(rho, 1 - 1e-16) / 2) ** 2
        upper = np.full(len(X), np.inf)
        for frac in np.linspace(0.02, 0.98, 49):
            a = rho + frac * (1 - rho)
            b = np.sqrt(np.maximum(1 - a * a, 1e-300))
            k = (np.pi / (16 * a * a) / np.sin(np.pi * (rho + a) / (2 * a)) ** 2
                 * np.pi / (16 * b * b))
            upper = np.minimum(upper, k)
        return lower / det2, upper / det2
    P = body.as_polytope()
    idx = range(len(P.normals))
    pairs = np.array([[P.normals[i], P.normals[j]] for i in idx for j in idx if i < j])
    lower = _slab_pair_kernel(X, P, pairs)
    upper = np.full(len(X), np.inf)
    # corner parallelograms of every vertex triangle; the triangles cover P
    V = P.vertices
    m = len(V)
    for i in range(m):
        for j in range(m):
            for k in range(j + 1, m):
                if i in (j, k):
                    continue
                E = np.column_stack([V[j] - V[i], V[k] - V[i]])
                if abs(np.linalg.det(E)) < 1e-12:
                    continue
                kp = _parallelogram_kernel(X, V[i], E)
                upper = np.where(kp > 0, np.minimum(upper, kp), upper)
    return lower, upper
