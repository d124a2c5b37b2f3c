"""Seeded Monte Carlo reference integrators.

These are deliberately naive: uniform rejection sampling in the bounding
box of a body.  They share nothing with the closed forms they check
except the body's membership test.

Streams come from the Philox counter-based generator.  A run of ``N``
samples is split into fixed-size chunks; chunk ``j`` uses key ``seed`` and
a counter block starting at ``j << 64``, so every chunk is an independent,
reproducible substream and the result depends only on ``(seed, N)``.
Per-chunk partial sums are merged with ``math.fsum``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convex_body import Body, CutSpec, contains, support_many

__all__ = ["SamplerState", "mc_integrate", "mc_volume", "mc_laplace", "mc_cap_volume",
           "sample_body"]

CHUNK = 1 << 16


@dataclass
class SamplerState:
    """Position in a seeded uniform stream over a bounding box.

    Attributes
    ----------
    seed : int
        64-bit Philox key.
    counter : int
        Index of the next chunk to draw.
    lo, hi : ndarray
        Bounding box corners.
    """
    seed: int
    counter: int
    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def for_body(cls, body: Body, seed: int) -> "SamplerState":
        E = np.eye(body.dim)
        return cls(int(seed) & (2 ** 64 - 1), 0, -support_many(body, -E), support_many(body, E))

    @property
    def box_volume(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def draw(self, count: int) -> np.ndarray:
        """Next chunk of ``count`` uniform points; advances the counter."""
        bitgen = np.random.Philox(key=self.seed, counter=[0, self.counter, 0, 0])
        U = np.random.Generator(bitgen).random((count, len(self.lo)))
        self.counter += 1
        return self.lo + U * (self.hi - self.lo)


def mc_integrate(body: Body, f, N: int, seed: int):
    """Estimate the integral of ``f`` over ``body`` and its standard error.

    ``f`` maps an (m, n) array of points to m values; it is only called on
    points inside the body.  Returns ``(estimate, stderr)``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    st = SamplerState.for_body(body, seed)
    s1, s2 = [], []
    left = N
    while left > 0:
        m = min(CHUNK, left)
        X = st.draw(m)
        inside = contains(body, X)
        vals = np.zeros(m)
        if inside.any():
            vals[inside] = f(X[inside])
        s1.append(float(vals.sum()))
        s2.append(float((vals * vals).sum()))
        left -= m
    mean = math.fsum(s1) / N
    var = max(math.fsum(s2) / N - mean * mean, 0.0)
    V = st.box_volume
    return V * mean, V * math.sqrt(var / N)


def mc_volume(body: Body, N: int, seed: int):
    """Rejection estimate of the volume with its binomial standard error."""
    return mc_integrate(body, lambda X: np.ones(len(X)), N, seed)


def mc_laplace(body: Body, t, N: int, seed: int):
    """Estimate of J(t) = int_body exp(-2 x.t) dx.

    The integrand is scaled by exp(-2 h(-t)) while sampling so that it
    stays in [0, 1], and the scale is restored at the end.
    """
    t = np.asarray(t, dtype=float)
    shift = float(support_many(body, -t[None])[0])
    est, err = mc_integrate(body, lambda X: np.exp(-2.0 * (X @ t + shift)), N, seed)
    scale = math.exp(2.0 * shift)
    return est * scale, err * scale


def mc_cap_volume(body: Body, cut: CutSpec, N: int, seed: int):
    """Rejection estimate of vol{x in body : x . v >= r}."""
    return mc_integrate(body, lambda X: (X @ cut.direction >= cut.offset).astype(float), N, seed)


def sample_body(body: Body, count: int, seed: int) -> np.ndarray:
    """Exactly ``count`` uniform interior points, by rejection."""
    st = SamplerState.for_body(body, seed)
    out, have = [], 0
    while have < count:
        X = st.draw(CHUNK)
        X = X[contains(body, X)]
        out.append(X)
        have += len(X)
    return np.concatenate(out)[:count]
