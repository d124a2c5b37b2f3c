"""Convex bodies in R^n and their exact geometric primitives.

Four variants share one small interface:

* `Box`       -- axis-aligned product of open intervals,
* `Simplex`   -- convex hull of n+1 affinely independent points,
* `Polytope`  -- carries both its vertex list and its facet half-spaces,
* `Ellipsoid` -- ``center + shape @ B^n``.

Module-level functions (`volume`, `support`, `cap_volume`, `cut_depth`, ...)
are the public entry points and dispatch on the variant.  Bodies are open
sets: boundary points are never "contained".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull

from .errors import (DegenerateBody, DeltaOutOfRange, EmptySection, FloatbergError,
                     InvalidBody, NotSymmetric)
from .quadrature import adaptive_quad
from .tolerances import TOL


def unit_ball_volume(n: int) -> float:
    """Volume of the Euclidean unit ball in R^n."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    # omega_n = 2 pi / n * omega_(n-2), exact at the start values 1 and 2
    w = 2.0 if n % 2 else 1.0
    for k in range(2 + n % 2, n + 1, 2):
        w *= 2.0 * math.pi / k
    return w


def as_direction(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or abs(np.linalg.norm(v) - 1.0) > TOL.unit_vector:
        raise ValueError(f"direction must be a unit vector, got {v!r}")
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@dataclass(frozen=True)
class CutSpec:
    """The half-space ``{x : x . direction >= offset}``."""
    direction: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "direction", as_direction(self.direction))
        object.__setattr__(self, "offset", float(self.offset))


# ---------------------------------------------------------------- variants

class Body:
    """Common base; subclasses are immutable value objects."""
    dim: int

    def as_polytope(self) -> "Polytope":
        raise TypeError(f"{type(self).__name__} has no polytope form")


@dataclass(frozen=True, eq=False)
class Box(Body):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise InvalidBody("box bounds must be 1-D arrays of equal length")
        if not np.all(lo < hi):
            raise InvalidBody("box requires lo < hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    @cached_property
    def _poly(self):
        n = self.dim
        corners = np.array(np.meshgrid(*zip(self.lo, self.hi), indexing="ij")).reshape(n, -1).T
        return Polytope.from_vertices(corners)

    def as_polytope(self):
        return self._poly


@dataclass(frozen=True, eq=False)
class Simplex(Body):
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
            raise InvalidBody("simplex needs n+1 vertices in R^n")
        if np.linalg.matrix_rank(v[1:] - v[0]) < v.shape[1]:
            raise DegenerateBody("simplex vertices are affinely dependent")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @cached_property
    def _poly(self):
        return Polytope.from_vertices(self.vertices)

    def as_polytope(self):
        return self._poly


@dataclass(frozen=True, eq=False)
class Polytope(Body):
    """Vertices (m, n), outward unit normals (k, n), offsets (k,).

    ``facets[i]`` lists the vertex indices of facet ``i`` in cyclic order
    (a pair for n=2, a single index for n=1).
    """
    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    facets: tuple = field(default=())

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        N = np.asarray(self.normals, dtype=float)
        c = np.asarray(self.offsets, dtype=float)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "normals", N)
        object.__setattr__(self, "offsets", c)
        n = V.shape[1]
        if np.linalg.matrix_rank(V - V.mean(axis=0)) < n:
            raise DegenerateBody("polytope has empty interior")
        slack = V @ N.T - c
        if slack.max() > TOL.polytope_consistency:
            raise InvalidBody("a vertex violates a facet inequality")
        touching = (np.abs(slack) <= TOL.polytope_consistency).sum(axis=0)
        if touching.min() < n:
            raise InvalidBody("a facet is touched by fewer than n vertices")

    @property
    def dim(self):
        return self.vertices.shape[1]

    def as_polytope(self):
        return self

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        """Convex hull of ``points`` (n <= 3) with both representations."""
        P = np.asarray(points, dtype=float)
        if P.ndim != 2:
            raise InvalidBody("points must be an (m, n) array")
        n = P.shape[1]
        if n == 1:
            lo, hi = P.min(), P.max()
            if not lo < hi:
                raise DegenerateBody("interval has zero length")
            return cls(np.array([[lo], [hi]]), np.array([[-1.0], [1.0]]),
                       np.array([-lo, hi]), ((0,), (1,)))
        if n > 3:
            raise InvalidBody("polytopes are supported for n <= 3")
        if P.shape[0] <= n or np.linalg.matrix_rank(P - P.mean(axis=0)) < n:
            raise DegenerateBody("points span a lower-dimensional set")
        hull = ConvexHull(P)
        if n == 2:
            V = P[hull.vertices]          # counter-clockwise
            E = np.roll(V, -1, axis=0) - V
            N = normalize(np.column_stack([E[:, 1], -E[:, 0]]))
            c = np.einsum("ij,ij->i", N, V)
            m = len(V)
            return cls(V, N, c, tuple((i, (i + 1) % m) for i in range(m)))
        return cls._from_hull3(P, hull)

    @classmethod
    def _from_hull3(cls, P, hull):
        idx = np.unique(hull.simplices)
        V = P[idx]
        eq = hull.equations
        # qhull triangulates facets; merge coplanar triangles
        groups: list[list[int]] = []
        for i, e in enumerate(eq):
            for g in groups:
                if np.allclose(eq[g[0]], e, atol=1e-9):
                    g.append(i)
                    break
            else:
                groups.append([i])
        normals, offsets, facets = [], [], []
        for g in groups:
            nrm = eq[g[0], :3]
            scale = np.linalg.norm(nrm)
            nrm, off = nrm / scale, -eq[g[0], 3] / scale
            on = np.where(np.abs(V @ nrm - off) <= 1e-9 * max(1.0, abs(off)))[0]
            ctr = V[on].mean(axis=0)
            e1 = normalize(V[on[0]] - ctr)
            e2 = np.cross(nrm, e1)
            ang = np.arctan2((V[on] - ctr) @ e2, (V[on] - ctr) @ e1)
            normals.append(nrm)
            offsets.append(off)
            facets.append(tuple(int(k) for k in on[np.argsort(ang)]))
        return cls(V, np.array(normals), np.array(offsets), tuple(facets))

    @cached_property
    def edges(self) -> np.ndarray:
        if self.dim == 1:
            return np.array([[0, 1]])
        pairs = set()
        for f in self.facets:
            for i in range(len(f)):
                a, b = f[i], f[(i + 1) % len(f)]
                if a != b:
                    pairs.add((min(a, b), max(a, b)))
        return np.array(sorted(pairs))

    @cached_property
    def simplices(self) -> np.ndarray:
        """Fan triangulation from the first vertex, shape (m, n+1, n)."""
        apex = self.vertices[0]
        out = []
        for f in self.facets:
            if 0 in f:
                continue
            pts = self.vertices[list(f)]
            if self.dim <= 2:
                out.append(np.vstack([apex, pts]))
            else:
                for i in range(1, len(f) - 1):
                    out.append(np.vstack([apex, pts[0], pts[i], pts[i + 1]]))
        return np.array(out)


@dataclass(frozen=True, eq=False)
class Ellipsoid(Body):
    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        A = np.atleast_2d(np.asarray(self.shape, dtype=float))
        if A.shape != (c.size, c.size):
            raise InvalidBody("shape matrix must be n x n")
        if abs(np.linalg.det(A)) <= 0:
            raise DegenerateBody("shape matrix is singular")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", A)

    @property
    def dim(self):
        return self.center.size

    @cached_property
    def inverse(self):
        return np.linalg.inv(self.shape)

    @cached_property
    def abs_det(self):
        return abs(np.linalg.det(self.shape))


# ----------------------------------------------------------- constructors

def unit_square() -> Box:
    return Box([0.0, 0.0], [1.0, 1.0])


def reference_triangle(scale: float = 1.0) -> Simplex:
    """conv{0, scale*e1, scale*e2}; scale=2 gives the doubled triangle."""
    return Simplex(scale * np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


def ball(n: int = 2, radius: float = 1.0, center=None) -> Ellipsoid:
    c = np.zeros(n) if center is None else center
    return Ellipsoid(c, radius * np.eye(n))


def body_from_dict(spec: dict) -> Body:
    """Parse the JSON body schema (``type`` plus variant fields)."""
    kind = spec.get("type")
    try:
        if kind == "box":
            return Box(spec["lo"], spec["hi"])
        if kind == "simplex":
            return Simplex(spec["vertices"])
        if kind == "polytope":
            return Polytope.from_vertices(spec["vertices"])
        if kind == "ellipsoid":
            return Ellipsoid(spec["center"], spec["shape"])
    except KeyError as exc:
        raise InvalidBody(f"body of type {kind!r} is missing field {exc.args[0]!r}") from None
    raise InvalidBody(f"unknown body type {kind!r}")


def body_to_dict(body: Body) -> dict:
    if isinstance(body, Box):
        return {"type": "box", "lo": body.lo.tolist(), "hi": body.hi.tolist()}
    if isinstance(body, Simplex):
        return {"type": "simplex", "vertices": body.vertices.tolist()}
    if isinstance(body, Polytope):
        return {"type": "polytope", "vertices": body.vertices.tolist()}
    return {"type": "ellipsoid", "center": body.center.tolist(), "shape": body.shape.tolist()}


# ------------------------------------------------------------- primitives

def volume(body: Body) -> float:
    if isinstance(body, Box):
        return float(np.prod(body.hi - body.lo))
    if isinstance(body, Simplex):
        return _simplex_volume(body.vertices)
    if isinstance(body, Ellipsoid):
        return unit_ball_volume(body.dim) * body.abs_det
    S = body.simplices
    n = body.dim
    return math.fsum(np.abs(np.linalg.det(S[:, 1:] - S[:, :1]))) / math.factorial(n)


def _simplex_volume(V):
    n = V.shape[1]
    return abs(np.linalg.det(V[1:] - V[0])) / math.factorial(n)


def support(body: Body, v) -> float:
    """max over the body of x . v."""
    v = np.asarray(v, dtype=float)
    if isinstance(body, Box):
        return float(np.maximum(body.lo * v, body.hi * v).sum())
    if isinstance(body, Ellipsoid):
        return float(body.center @ v + np.linalg.norm(body.shape.T @ v))
    V = body.vertices
    return float((V @ v).max())


def support_many(body: Body, W) -> np.ndarray:
    """Vectorised `support` for rows of ``W``."""
    W = np.asarray(W, dtype=float)
    if isinstance(body, Box):
        return np.maximum(W * body.lo, W * body.hi).sum(axis=-1)
    if isinstance(body, Ellipsoid):
        return W @ body.center + np.linalg.norm(W @ body.shape, axis=-1)
    return (W @ body.vertices.T).max(axis=-1)


def contains(body: Body, x) -> bool | np.ndarray:
    """Strict interior membership; accepts one point or an (m, n) array."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    tol = TOL.containment
    if isinstance(body, Box):
        inside = np.all((X > body.lo + tol) & (X < body.hi - tol), axis=1)
    elif isinstance(body, Ellipsoid):
        U = (X - body.center) @ body.inverse.T
        inside = np.linalg.norm(U, axis=1) < 1.0 - tol
    else:
        P = body.as_polytope()
        inside = np.all(X @ P.normals.T < P.offsets - tol, axis=1)
    return bool(inside[0]) if single else inside


def affine_image(body: Body, A, b=None) -> Body:
    """Image of ``body`` under ``x -> A x + b``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = body.dim
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    if A.shape != (n, n) or abs(np.linalg.det(A)) == 0:
        raise DegenerateBody("affine map must be an invertible n x n matrix")
    if isinstance(body, Ellipsoid):
        return Ellipsoid(A @ body.center + b, A @ body.shape)
    if isinstance(body, Simplex):
        return Simplex(body.vertices @ A.T + b)
    if isinstance(body, Box) and np.count_nonzero(A - np.diag(np.diag(A))) == 0:
        d = np.diag(A)
        p, q = d * body.lo + b, d * body.hi + b
        return Box(np.minimum(p, q), np.maximum(p, q))
    P = body.as_polytope()
    return Polytope.from_vertices(P.vertices @ A.T + b)


def is_symmetric(body: Body) -> bool:
    tol = TOL.symmetry
    if isinstance(body, Box):
        return bool(np.allclose(body.lo, -body.hi, atol=tol))
    if isinstance(body, Ellipsoid):
        return bool(np.allclose(body.center, 0.0, atol=tol))
    if isinstance(body, Simplex):
        return False
    V = body.vertices
    if not np.allclose(V.mean(axis=0), 0.0, atol=tol):
        return False
    d = np.linalg.norm(V[:, None, :] + V[None, :, :], axis=-1)
    return bool(np.all(d.min(axis=1) <= tol))


def polar(body: Body) -> Body:
    """Polar body of an origin-symmetric body."""
    if not is_symmetric(body):
        raise NotSymmetric("polar requires an origin-symmetric body")
    if isinstance(body, Ellipsoid):
        return Ellipsoid(np.zeros(body.dim), body.inverse.T)
    P = body.as_polytope()
    return Polytope.from_vertices(P.normals / P.offsets[:, None])


# ------------------------------------------------------ sections and caps

def _ball_cap_fraction(rho: float, n: int) -> float:
    """vol{u in B^n : u_1 >= rho} by quadrature of section measures.

    With ``u_1 = cos(phi)`` the section measure becomes
    ``omega_{n-1} sin(phi)^n dphi``, which is smooth on [0, arccos rho].
    """
    if rho >= 1.0:
        return 0.0
    if rho <= -1.0:
        return unit_ball_volume(n)
    if n == 1:
        return 1.0 - rho
    top = math.acos(rho)
    w = unit_ball_volume(n - 1)
    res = adaptive_quad(lambda p: np.sin(p) ** n, [0.0, top],
                        rel_tol=TOL.cap_quadrature, nodes=16, max_depth=30)
    return w * res.value


def _section_points(P: Polytope, v, r):
    """Points where the hyperplane x.v = r meets the edges of P."""
    s = P.vertices @ v - r
    E = P.edges
    sa, sb = s[E[:, 0]], s[E[:, 1]]
    cross = sa * sb < 0
    t = sa[cross] / (sa[cross] - sb[cross])
    pts = P.vertices[E[cross, 0]] + t[:, None] * (P.vertices[E[cross, 1]] - P.vertices[E[cross, 0]])
    on = np.abs(s) <= 1e-14 * max(1.0, abs(r))
    pts = np.vstack([pts, P.vertices[on]])
    return pts


def _order_in_plane(pts, v):
    ctr = pts.mean(axis=0)
    e1 = normalize(np.cross(v, [1.0, 0, 0]) if abs(v[0]) < 0.9 else np.cross(v, [0, 1.0, 0]))
    e2 = np.cross(v, e1)
    ang = np.arctan2((pts - ctr) @ e2, (pts - ctr) @ e1)
    return pts[np.argsort(ang)]


def _polygon_area_centroid3(pts, nrm):
    """Area and centroid of a planar convex polygon (ordered) in R^3."""
    o = pts[0]
    a = pts[1:-1] - o
    b = pts[2:] - o
    cr = np.cross(a, b) @ nrm
    area = 0.5 * cr.sum()
    if area == 0.0:
        return 0.0, pts.mean(axis=0)
    cen = o + ((a + b) / 3.0 * (0.5 * cr)[:, None]).sum(axis=0) / area
    return abs(area), cen


def section_barycenter(body: Body, cut: CutSpec) -> np.ndarray:
    """Barycenter of the slice of ``body`` by the hyperplane of ``cut``."""
    v, r = cut.direction, cut.offset
    if not -support(body, -v) < r < support(body, v):
        raise EmptySection(f"hyperplane x.v = {r} misses the interior")
    n = body.dim
    if n == 1:
        return np.array([r * v[0]])
    if isinstance(body, Ellipsoid):
        w = body.shape.T @ v
        a = np.linalg.norm(w)
        rho = (r - body.center @ v) / a
        return body.center + body.shape @ (rho * w / a)
    P = body.as_polytope()
    pts = _section_points(P, v, r)
    if n == 2:
        tdir = np.array([-v[1], v[0]])
        proj = pts @ tdir
        return 0.5 * (pts[np.argmin(proj)] + pts[np.argmax(proj)])
    pts = _order_in_plane(_dedupe(pts), v)
    if len(pts) < 3:
        raise EmptySection("degenerate section")
    return _polygon_area_centroid3(pts, v)[1]


def _dedupe(pts, tol=1e-13):
    keep = []
    for p in pts:
        if all(np.linalg.norm(p - q) > tol for q in keep):
            keep.append(p)
    return np.array(keep)


def _clip_polygon(poly, v, r):
    """Sutherland-Hodgman: keep the part of an ordered polygon with x.v >= r."""
    s = poly @ v - r
    out = []
    m = len(poly)
    for i in range(m):
        j = (i + 1) % m
        if s[i] >= 0:
            out.append(poly[i])
        if (s[i] >= 0) != (s[j] >= 0):
            t = s[i] / (s[i] - s[j])
            out.append(poly[i] + t * (poly[j] - poly[i]))
    return np.array(out) if out else np.empty((0, poly.shape[1]))


def _shoelace(poly):
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * (x @ np.roll(y, -1) - y @ np.roll(x, -1))


def cap_volume(body: Body, cut: CutSpec) -> float:
    """vol{x in body : x . v >= r}."""
    v, r = cut.direction, cut.offset
    hi = support(body, v)
    lo = -support(body, -v)
    if r >= hi:
        return 0.0
    if r <= lo:
        return volume(body)
    n = body.dim
    if isinstance(body, Ellipsoid):
        a = np.linalg.norm(body.shape.T @ v)
        rho = (r - body.center @ v) / a
        return body.abs_det * _ball_cap_fraction(rho, n)
    if n == 1:
        return float(hi - r)
    P = body.as_polytope()
    if n == 2:
        poly = _clip_polygon(P.vertices[[f[0] for f in P.facets]], v, r)
        return float(abs(_shoelace(poly))) if len(poly) >= 3 else 0.0
    return _cap_volume3(P, v, r)


def _cap_volume3(P: Polytope, v, r):
    """Divergence theorem over the clipped facets plus the section face."""
    o = P.vertices[np.argmax(P.vertices @ v)]
    total = 0.0
    for f, nrm, off in zip(P.facets, P.normals, P.offsets):
        poly = _clip_polygon(P.vertices[list(f)], v, r)
        if len(poly) < 3:
            continue
        area, _ = _polygon_area_centroid3(poly, nrm)
        total += (off - nrm @ o) * area
    sec = _section_points(P, v, r)
    if len(sec) >= 3:
        sec = _order_in_plane(_dedupe(sec), v)
        if len(sec) >= 3:
            area, _ = _polygon_area_centroid3(sec, -v)
            total += (-r + v @ o) * area
    return total / 3.0


def cut_depth(body: Body, v, delta: float) -> float:
    """Offset r with cap_volume(body, (v, r)) == delta, by bisection."""
    v = as_direction(v)
    vol = volume(body)
    if not 0.0 < delta < vol:
        raise DeltaOutOfRange(f"delta={delta} outside (0, {vol})")
    lo, hi = -support(body, -v), support(body, v)
    f_lo, f_hi = vol - delta, -delta
    for _ in range(TOL.bisection_max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = cap_volume(body, CutSpec(v, mid)) - delta
        if f_mid == 0.0:
            return mid
        if f_mid > 0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    r = lo if abs(f_lo) <= abs(f_hi) else hi
    resid = min(abs(f_lo), abs(f_hi))
    if resid > TOL.cut_residual * vol:
        raise FloatbergError(f"cut_depth residual {resid:.3e} exceeds tolerance")
    return r


def exit_distance(body: Body, x0, u) -> float:
    """Distance from interior x0 to the boundary along unit direction u."""
    x0 = np.asarray(x0, dtype=float)
    u = np.asarray(u, dtype=float)
    if isinstance(body, Ellipsoid):
        a = body.inverse @ u
        b = body.inverse @ (x0 - body.center)
        A, B, C = a @ a, 2 * a @ b, b @ b - 1.0
        return float((-B + math.sqrt(B * B - 4 * A * C)) / (2 * A))
    P = body.as_polytope()
    du = P.normals @ u
    gap = P.offsets - P.normals @ x0
    pos = du > 0
    return float((gap[pos] / du[pos]).min())



# --------------------------------------------------- Lowner-John ellipsoid

def mvee(points, eps: float = TOL.mvee_gap, return_gap: bool = False):
    """Minimum-volume enclosing ellipsoid (Khachiyan with away steps).

    Runs the Frank-Wolfe iteration on the barycentric weights of the lifted
    points until ``max_i M_i <= (1 + eps)(n + 1)``, which certifies the
    volume is within a factor ``(1 + eps)^((n+1)/2)`` of optimal.  The
    returned ellipsoid is rescaled so every point lies inside it.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[0] <= P.shape[1]:
        raise DegenerateBody("need at least n+1 points")
    m, n = P.shape
    if np.linalg.matrix_rank(P - P.mean(axis=0)) < n:
        raise DegenerateBody("points are affinely dependent")
    if n >= 2 and m > n + 1:
        P = P[ConvexHull(P).vertices]
        m = P.shape[0]
    Q = np.hstack([P, np.ones((m, 1))])
    d1 = n + 1
    u = np.full(m, 1.0 / m)
    gap = np.inf
    for _ in range(TOL.mvee_max_iter):
        X = Q.T @ (u[:, None] * Q)
        M = np.einsum("ij,ij->i", Q @ np.linalg.inv(X), Q)
        j = int(np.argmax(M))
        gap = M[j] / d1 - 1.0
        supp = u > 0
        k = int(np.flatnonzero(supp)[np.argmin(M[supp])])
        if gap <= eps and M[k] >= (1 - eps) * d1:
            break
        if M[j] - d1 >= d1 - M[k]:
            beta = (M[j] - d1) / (d1 * (M[j] - 1.0))
            u *= 1.0 - beta
            u[j] += beta
        else:
            beta = min((d1 - M[k]) / (d1 * (M[k] - 1.0)), u[k] / (1.0 - u[k]))
            u *= 1.0 + beta
            u[k] -= beta
            u[k] = max(u[k], 0.0)
    c = u @ P
    D = P - c
    S = D.T @ (u[:, None] * D)
    Sinv = np.linalg.inv(S)
    scale = np.einsum("ij,jk,ik->i", D, Sinv, D).max()
    w, R = np.linalg.eigh(scale * S)
    E = Ellipsoid(c, (R * np.sqrt(w)) @ R.T)
    return (E, float(gap)) if return_gap else E


def john_inner(E: Body, n: int | None = None) -> Ellipsoid:
    """Shrink an ellipsoid by 1/n about its center."""
    if not isinstance(E, Ellipsoid):
        raise TypeError("john_inner needs an ellipsoid")
    n = E.dim if n is None else n
    return Ellipsoid(E.center, E.shape / n)


# ------------------------------------------------------- direction grids

def uniform_directions(n: int, count: int) -> np.ndarray:
    """Deterministic unit vectors: angular grid (n=2), Fibonacci sphere (n=3)."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(th), np.sin(th)])
    if n == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        phi = np.pi * (1.0 + 5.0 ** 0.5) * k
        r = np.sqrt(1.0 - z * z)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise ValueError("direction grids exist for n <= 3")


def default_direction_count(n: int) -> int:
    return {1: 2, 2: 720, 3: 2000}[n]
