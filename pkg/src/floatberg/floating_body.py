"""Outer polyhedral models of the convex floating body D_delta.

D_delta is the intersection of the open half-spaces ``{x . v < r_v}`` whose
complementary caps have volume delta.  A finite direction grid gives an
outer approximation: a point rejected by one cut is certainly outside, a
point accepted by all of them is inside up to grid resolution.  The
barycenters of the cutting sections lie on the boundary of D_delta and are
the natural boundary samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .convex_body import (Body, CutSpec, as_direction, contains, cut_depth, exit_distance,
                          default_direction_count, section_barycenter, uniform_directions,
                          volume)
from .errors import DeltaOutOfRange, EmptyFloatingBody, FloatbergError
from .tolerances import TOL

__all__ = ["FloatingBodyApprox", "build", "member", "boundary_points",
           "reference_member_square", "reference_member_triangle", "radial_gap",
           "wet_volume"]

# LP slack below which the cut family is treated as having empty interior
_EMPTY_SLACK = 1e-10
# ties within a few ulps count as boundary points, which the open sets exclude
_ULPS = 16 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class FloatingBodyApprox:
    """Cuts ``x . v_k < r_k`` and their section barycenters for one delta.

    Attributes
    ----------
    delta : float
        Cap volume cut off by every hyperplane.
    directions : ndarray, shape (k, n)
        Unit normals v_k.
    offsets : ndarray, shape (k,)
        Cut depths r_k.
    barycenters : ndarray, shape (k, n)
        Barycenter of each cutting section; these sample the boundary.
    body : Body
        The body the cuts were computed from.
    """
    delta: float
    directions: np.ndarray
    offsets: np.ndarray
    barycenters: np.ndarray
    body: Body

    @property
    def cuts(self) -> list[CutSpec]:
        return [CutSpec(v, r) for v, r in zip(self.directions, self.offsets)]

    def __len__(self):
        return len(self.offsets)

    def __call__(self, x):
        return member(self, x)


def _directions(body: Body, directions):
    if directions is None:
        directions = uniform_directions(body.dim, default_direction_count(body.dim))
    W = np.atleast_2d(np.asarray(directions, dtype=float))
    if W.shape[0] == 0 or W.shape[1] != body.dim:
        raise ValueError(f"directions must be a nonempty (k, {body.dim}) array")
    for w in W:
        as_direction(w)
    return W


def _has_interior(W, r):
    """Largest tau with some x satisfying W x + tau <= r, capped at 1."""
    k, n = W.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A = np.hstack([W, np.ones((k, 1))])
    res = linprog(c, A_ub=A, b_ub=r, bounds=[(None, None)] * n + [(None, 1.0)],
                  method="highs")
    if res.status != 0:
        raise FloatbergError(f"emptiness probe failed: {res.message}")
    return -res.fun


def build(body: Body, delta: float, directions=None) -> FloatingBodyApprox:
    """Cut depths and section barycenters of ``body`` along ``directions``.

    Parameters
    ----------
    body : Body
    delta : float
        Cap volume, ``0 < delta <= volume(body) / 2``.
    directions : array_like, optional
        Unit vectors; defaults to 720 angles in the plane and a 2000-point
        Fibonacci sphere in space.

    Raises
    ------
    DeltaOutOfRange
        If delta is outside the admissible range.
    EmptyFloatingBody
        If no point satisfies every cut.
    """
    vol = volume(body)
    if not 0.0 < delta <= 0.5 * vol:
        raise DeltaOutOfRange(f"delta={delta} outside (0, {0.5 * vol}]")
    W = _directions(body, directions)
    r = np.array([cut_depth(body, w, delta) for w in W])
    B = np.array([section_barycenter(body, CutSpec(w, rk)) for w, rk in zip(W, r)])
    fba = FloatingBodyApprox(float(delta), W, r, B, body)
    if not member(fba, B.mean(axis=0)):
        if _has_interior(W, r) <= _EMPTY_SLACK:
            raise EmptyFloatingBody(f"no point satisfies all {len(r)} cuts at delta={delta}")
    return fba


def member(fba: FloatingBodyApprox, x):
    """True where ``x . v_k < r_k`` for every cut (vectorised over rows of x).

    Rounding-level ties are resolved as boundary points, so the section
    barycenters themselves are never members.
    """
    X = np.asarray(x, dtype=float)
    guard = _ULPS * (np.linalg.norm(X, axis=-1)[..., None] + np.abs(fba.offsets))
    inside = np.all(X @ fba.directions.T < fba.offsets - guard, axis=-1)
    return bool(inside) if X.ndim == 1 else inside


def boundary_points(body: Body, delta: float, directions=None) -> np.ndarray:
    """Section barycenters, which sample the boundary of D_delta."""
    return build(body, delta, directions).barycenters


def reference_member_square(x, delta: float):
    """Exact floating-body membership for the unit square.

    ``min(xy, (1-x)y, x(1-y), (1-x)(1-y)) > delta/2``; points outside the
    open square are non-members.
    """
    X = np.asarray(x, dtype=float)
    a, b = X[..., 0], X[..., 1]
    inside = (a > 0) & (a < 1) & (b > 0) & (b < 1)
    m = np.minimum(np.minimum(a * b, (1 - a) * b), np.minimum(a * (1 - b), (1 - a) * (1 - b)))
    out = inside & (m > 0.5 * delta * (1 + _ULPS))
    return bool(out) if X.ndim == 1 else out


def reference_member_triangle(x, delta: float, scale: float = 1.0):
    """Exact floating-body membership for ``scale`` times the reference triangle.

    For scale 1: ``min(xy, (1-x-y)y, (1-x-y)x) > delta/2``.  A scaled
    triangle is handled by mapping back, using that the floating body of
    A(D) at |det A| delta is the image of the one of D at delta.
    """
    X = np.asarray(x, dtype=float) / scale
    d = delta / scale ** 2
    a, b = X[..., 0], X[..., 1]
    c = 1.0 - a - b
    inside = (a > 0) & (b > 0) & (c > 0)
    m = np.minimum(a * b, np.minimum(c * b, c * a))
    out = inside & (m > 0.5 * d * (1 + _ULPS))
    return bool(out) if X.ndim == 1 else out


def _boundary_radius(pred, center, u, hi, tol):
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(center + mid * u):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def radial_gap(fba: FloatingBodyApprox, reference, center, rays) -> float:
    """Largest difference of boundary radii of two star-shaped sets.

    Parameters
    ----------
    fba : FloatingBodyApprox
    reference : callable
        Membership predicate ``reference(x) -> bool``; another
        `FloatingBodyApprox` works as well.
    center : array_like
        A point interior to both sets.
    rays : array_like, shape (k, n)
        Unit directions along which both radii are bisected to 1e-9.
    """
    center = np.asarray(center, dtype=float)
    if not (member(fba, center) and reference(center)):
        raise ValueError("center must be interior to both sets")
    gap = 0.0
    for u in np.atleast_2d(np.asarray(rays, dtype=float)):
        u = as_direction(u)
        hi = exit_distance(fba.body, center, u)
        ra = _boundary_radius(lambda p: member(fba, p), center, u, hi, TOL.radial_bisection)
        rb = _boundary_radius(reference, center, u, hi, TOL.radial_bisection)
        gap = max(gap, abs(ra - rb))
    return gap


def wet_volume(body: Body, delta: float, fba: FloatingBodyApprox | None = None,
               samples: int = 100_000, seed: int = 0):
    """Monte Carlo estimate of vol(body minus D_delta) and its standard error."""
    from .oracle import mc_integrate
    if fba is None:
        fba = build(body, delta)
    if fba.body is not body:
        raise ValueError("fba was built from a different body")

    def wet(X):
        return (contains(body, X) & ~member(fba, X)).astype(float)

    return mc_integrate(body, wet, samples, seed)
