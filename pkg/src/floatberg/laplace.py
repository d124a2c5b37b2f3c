"""Exponential moments J(t) = int_D exp(-2 x.t) dx of convex bodies.

Everything here is computed in *scaled* form,

    J(t) = exp(2 h(-t)) * Jhat(t),    h = support function,

so that ``Jhat`` stays O(vol) to O(|t|^-n) and never overflows.  The Bergman
integrand exp(-2 x.t) / J(t) then becomes exp(-2 (x.t + h(-t))) / Jhat(t)
with a non-negative exponent gap.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from .convex_body import (Body, Box, Ellipsoid, Polytope, Simplex, support_many,
                          unit_ball_volume, volume)
from .quadrature import adaptive_quad
from .tolerances import TOL

__all__ = ["laplace", "scaled_laplace", "exp_divided_difference"]


def _complete_homogeneous(d, order):
    """h_0..h_order of the rows of ``d`` via Newton's identities."""
    p = [None]
    di = d
    for _ in range(order):
        p.append(di.sum(axis=-1))
        di = di * d
    h = [np.ones(d.shape[:-1])]
    for j in range(1, order + 1):
        acc = sum(p[i] * h[j - i] for i in range(1, j + 1))
        h.append(acc / j)
    return h


def _taylor_dd(w, k):
    """Divided difference of exp(-2 .) over k+1 clustered nodes (last axis)."""
    mu = w.mean(axis=-1)
    h = _complete_homogeneous(w - mu[..., None], TOL.taylor_order)
    total = np.zeros_like(mu)
    for j, hj in enumerate(h):
        total = total + (-2.0) ** (k + j) / math.factorial(k + j) * hj
    return np.exp(-2.0 * mu) * total


def exp_divided_difference(w):
    """Divided difference of s -> exp(-2 s) over the last axis of ``w``.

    Nodes closer than the merge threshold are handled by a Taylor expansion
    about their mean; first differences use ``expm1``.  The input need not
    be sorted.
    """
    w = np.sort(np.asarray(w, dtype=float), axis=-1)
    if w.ndim == 1:
        return exp_divided_difference(w[None])[0]
    m = w.shape[-1]
    thr = TOL.divided_difference_merge
    tight = w[..., -1] - w[..., 0] < thr
    if m > 2 and tight.any():
        # fully clustered rows need one expansion, not a whole table of them
        out = np.empty(w.shape[:-1])
        out[tight] = _taylor_dd(w[tight], m - 1)
        if not tight.all():
            out[~tight] = exp_divided_difference(w[~tight])
        return out
    table = [np.exp(-2.0 * w[..., i]) for i in range(m)]
    for k in range(1, m):
        nxt = []
        for i in range(m - k):
            a, b = w[..., i], w[..., i + k]
            spread = b - a
            close = spread < thr
            safe = np.where(close, 1.0, spread)
            if k == 1:
                far = np.exp(-2.0 * a) * np.expm1(-2.0 * spread) / safe
            else:
                far = (table[i + 1] - table[i]) / safe
            if close.any():
                far[close] = _taylor_dd(w[..., i:i + k + 1][close], k)
            nxt.append(far)
        table = nxt
    return table[0]


def _box_factor(x):
    """(1 - exp(-x)) / x with its series below the switch point."""
    small = x < TOL.box_series
    safe = np.where(small, 1.0, x)
    series = 1.0 - x / 2.0 + x * x / 6.0 - x ** 3 / 24.0
    return np.where(small, series, -np.expm1(-safe) / safe)


def _ball_scaled(a, n):
    """int_{B^n} exp(-2 a u_1) du * exp(-2 a), closed form for n <= 3."""
    a = np.asarray(a, dtype=float)
    if n == 1:
        return 2.0 * _box_factor(4.0 * a)
    if n == 2:
        safe = np.where(a > 0, a, 1.0)
        return np.where(a > 1e-8, np.pi * special.ive(1, 2.0 * safe) / safe,
                        np.pi * (1.0 - 2.0 * a))
    if n == 3:
        y = 2.0 * a
        small = y < 0.05
        ys = np.where(small, 1.0, y)
        e = np.exp(-2.0 * ys)
        big = (ys * (1.0 + e) - (1.0 - e)) / (2.0 * ys ** 3)
        series = (1.0 / 3 + y ** 2 / 30 + y ** 4 / 840 + y ** 6 / 45360) * np.exp(-y)
        return 4.0 * np.pi * np.where(small, series, big)
    raise ValueError("closed-form ball moments implemented for n <= 3")


def _simplex_scaled(S, T):
    """Sum over simplices S (m, n+1, n) of their scaled moments at rows of T."""
    n = S.shape[-1]
    vols = np.abs(np.linalg.det(S[:, 1:] - S[:, :1])) / math.factorial(n)
    Z = np.einsum("kin,...n->...ki", S, T)
    zmin = Z.min(axis=(-2, -1), keepdims=True)
    dd = exp_divided_difference(Z - zmin)
    coef = math.factorial(n) * (-2.0) ** (-n)
    return coef * (dd * vols).sum(axis=-1)


def scaled_laplace(body: Body, T) -> np.ndarray:
    """Jhat(t) = J(t) exp(-2 h(-t)) for each row of ``T``."""
    T = np.asarray(T, dtype=float)
    if isinstance(body, Box):
        L = body.hi - body.lo
        return np.prod(L * _box_factor(2.0 * np.abs(T) * L), axis=-1)
    if isinstance(body, Ellipsoid):
        a = np.linalg.norm(T @ body.shape, axis=-1)
        return body.abs_det * _ball_scaled(a, body.dim)
    if isinstance(body, Simplex):
        return _simplex_scaled(body.vertices[None], T)
    return _simplex_scaled(body.as_polytope().simplices, T)


def laplace(body: Body, t) -> float:
    """J(t) = int_body exp(-2 x.t) dx.

    Boxes, simplices and polytopes use exact closed forms; ellipsoids are
    reduced to the unit ball and integrated over section measures.
    """
    t = np.asarray(t, dtype=float)
    if isinstance(body, Ellipsoid):
        return _ellipsoid_laplace_quad(body, t)
    shift = support_many(body, -t[None])[0]
    return float(np.exp(2.0 * shift) * scaled_laplace(body, t[None])[0])


def _ellipsoid_laplace_quad(E: Ellipsoid, t):
    n = E.dim
    a = float(np.linalg.norm(E.shape.T @ t))
    pref = E.abs_det * math.exp(-2.0 * E.center @ t + 2.0 * a)
    if a == 0.0:
        return volume(E)
    if n == 1:
        return pref * (1.0 - math.exp(-4.0 * a)) / (2.0 * a)
    # u_1 = -cos(phi): section measure omega_{n-1} sin^n(phi) dphi
    f = lambda p: np.sin(p) ** n * np.exp(-2.0 * a * (1.0 - np.cos(p)))
    width = min(math.pi, 8.0 / math.sqrt(a))
    res = adaptive_quad(f, [0.0, width, math.pi] if width < math.pi else [0.0, math.pi],
                        rel_tol=1e-13, nodes=16, max_depth=40)
    return pref * unit_ball_volume(n - 1) * res.value
