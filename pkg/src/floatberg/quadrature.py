"""Adaptive Gauss-Legendre panel quadrature.

The integrator works on vectorised integrands: ``f`` receives a 1-D array
of abscissae and must return an array of the same length.  Each panel is
estimated with an ``n``-point Gauss-Legendre rule and its error is the
difference between that estimate and the sum over its two halves, so the
reported error is a refinement difference, not a heuristic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import QuadratureNotConverged


@dataclass(frozen=True)
class QuadratureConfig:
    """Accuracy knobs for kernel evaluation.

    Parameters
    ----------
    rel_tol : float
        Target relative error of the integral.
    trunc_tol : float
        Integrand level, relative to its peak, below which the radial
        integration domain is cut off.
    max_subdivisions : int
        Maximum bisection depth of any panel.
    nodes : int
        Gauss-Legendre nodes per panel.
    """
    rel_tol: float = 1e-8
    trunc_tol: float = 1e-14
    max_subdivisions: int = 40
    nodes: int = 32

    def __post_init__(self):
        if min(self.rel_tol, self.trunc_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1 or self.nodes < 2:
            raise ValueError("max_subdivisions >= 1 and nodes >= 2 required")
        if not self.trunc_tol < self.rel_tol:
            raise ValueError("trunc_tol must be smaller than rel_tol")


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1] (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(edges, n):
    """Nodes and weights of an n-point rule on each interval of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def _panel_estimates(f, a, b, n):
    """GL estimates for many panels with a single call to ``f``."""
    x, w = gauss_legendre(n)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    pts = 0.5 * (a + b)[:, None] + half[:, None] * x
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ w)


@dataclass
class QuadResult:
    value: float
    error: float
    converged: bool
    panels: int


def adaptive_quad(f, breakpoints, rel_tol=1e-8, abs_tol=0.0, nodes=32,
                  max_depth=40, max_panels=20000) -> QuadResult:
    """Integrate ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    Interior breakpoints start as panel boundaries, which is where kinks or
    peaks of the integrand should be placed.  Panels are bisected in
    batches until the summed refinement error is below
    ``max(abs_tol, rel_tol * |value|)``.
    """
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    if bp.size < 2:
        return QuadResult(0.0, 0.0, True, 0)
    a, b = bp[:-1], bp[1:]
    mid = 0.5 * (a + b)
    coarse = _panel_estimates(f, a, b, nodes)
    halves = _panel_estimates(f, np.concatenate([a, mid]), np.concatenate([mid, b]), nodes)
    left, right = halves[:a.size], halves[a.size:]
    depth = np.zeros(a.size, dtype=int)

    while True:
        fine = left + right
        err = np.abs(coarse - fine)
        total = math.fsum(fine)
        errtot = float(err.sum())
        target = max(abs_tol, rel_tol * abs(total))
        if errtot <= target:
            return QuadResult(total, errtot, True, a.size)
        splittable = depth < max_depth
        if not splittable.any() or a.size >= max_panels:
            return QuadResult(total, errtot, False, a.size)
        # split every panel carrying more than its fair share, always the worst
        share = target / a.size
        pick = splittable & (err > share)
        if not pick.any():
            pick = np.zeros(a.size, dtype=bool)
            pick[np.argmax(np.where(splittable, err, -1.0))] = True
        keep = ~pick
        pa, pb = a[pick], b[pick]
        pm = 0.5 * (pa + pb)
        # children become panels whose coarse estimates are already known
        ca = np.concatenate([pa, pm])
        cb = np.concatenate([pm, pb])
        ccoarse = np.concatenate([left[pick], right[pick]])
        cm = 0.5 * (ca + cb)
        gh = _panel_estimates(f, np.concatenate([ca, cm]), np.concatenate([cm, cb]), nodes)
        cdepth = np.concatenate([depth[pick], depth[pick]]) + 1
        a = np.concatenate([a[keep], ca])
        b = np.concatenate([b[keep], cb])
        coarse = np.concatenate([coarse[keep], ccoarse])
        left = np.concatenate([left[keep], gh[:ca.size]])
        right = np.concatenate([right[keep], gh[ca.size:]])
        depth = np.concatenate([depth[keep], cdepth])
        order = np.argsort(a, kind="stable")
        a, b, coarse, left, right, depth = (arr[order] for arr in (a, b, coarse, left, right, depth))


def integrate(f, breakpoints, cfg: QuadratureConfig | None = None, abs_tol=0.0,
              raise_on_failure=True) -> QuadResult:
    """`adaptive_quad` driven by a `QuadratureConfig`."""
    cfg = cfg or QuadratureConfig()
    res = adaptive_quad(f, breakpoints, rel_tol=cfg.rel_tol, abs_tol=abs_tol,
                        nodes=cfg.nodes, max_depth=cfg.max_subdivisions)
    if not res.converged and raise_on_failure:
        raise QuadratureNotConverged(res.value, res.error)
    return res
