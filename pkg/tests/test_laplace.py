import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from floatberg.convex_body import (Box, Ellipsoid, Polytope, Simplex, ball, reference_triangle,
                                   support_many, unit_square, volume)
from floatberg.laplace import exp_divided_difference, laplace, scaled_laplace
from floatberg.oracle import mc_laplace

# 30-digit nested mpmath quadrature of exp(-2(3x - y)) over the triangle
J_T_3_M1 = 0.378534313520179521669048490607
# 30-digit polar mpmath quadrature over the unit disk at |t| = hypot(0.7, 0.2)
J_DISK = 4.05098975888083810182419117513


def test_zero_argument_gives_volume():
    bodies = [unit_square(), reference_triangle(), ball(2), ball(3, 0.5),
              Polytope.from_vertices([[0, 0], [2, 0], [2, 1], [0.5, 1.5]]), Box([0], [3])]
    for B in bodies:
        assert laplace(B, np.zeros(B.dim)) == pytest.approx(volume(B), rel=1e-12)


def test_square_closed_form():
    assert laplace(unit_square(), [1, 0]) == pytest.approx((1 - math.exp(-2)) / 2, rel=1e-14)


def test_triangle_reference():
    assert laplace(reference_triangle(), [3, -1]) == pytest.approx(J_T_3_M1, rel=1e-13)
    P = reference_triangle().as_polytope()
    assert laplace(P, [3, -1]) == pytest.approx(J_T_3_M1, rel=1e-13)


def test_disk_reference():
    t = np.array([0.7, 0.2])
    assert laplace(ball(2), t) == pytest.approx(J_DISK, rel=1e-12)
    # the closed form used inside the kernel agrees with the quadrature path
    s = scaled_laplace(ball(2), t[None])[0] * math.exp(2 * np.linalg.norm(t))
    assert s == pytest.approx(J_DISK, rel=1e-13)


def test_ellipsoid_paths_agree():
    E = Ellipsoid([0.3, -0.2, 0.1], [[1.0, 0.2, 0], [0, 0.7, 0.1], [0, 0, 1.3]])
    rng = np.random.default_rng(2)
    for _ in range(10):
        t = rng.normal(size=3) * 2
        exact = scaled_laplace(E, t[None])[0] * math.exp(2 * support_many(E, -t[None])[0])
        assert laplace(E, t) == pytest.approx(exact, rel=1e-11)


def _dd_reference(w):
    mpmath.mp.dps = 60
    w = [mpmath.mpf(float(x)) for x in w]
    f = [mpmath.exp(-2 * x) for x in w]
    m = len(w)
    for k in range(1, m):
        f = [(f[i + 1] - f[i]) / (w[i + k] - w[i]) for i in range(m - k)]
    return float(f[0])


@settings(max_examples=80, deadline=None)
@given(st.floats(0, 20), st.lists(st.floats(-7, 0.3), min_size=1, max_size=3))
def test_divided_difference_against_high_precision(base, log_gaps):
    # node gaps from 1e-7 to 2 exercise both the Taylor and the table branches
    w = base + np.concatenate([[0.0], np.cumsum(10.0 ** np.array(log_gaps))])
    assert exp_divided_difference(w) == pytest.approx(_dd_reference(w), rel=1e-10)


def test_divided_difference_coincident_nodes():
    # all nodes equal: (-2)^k e^{-2w} / k!
    for k in range(1, 4):
        w = np.full(k + 1, 0.3)
        assert exp_divided_difference(w) == pytest.approx((-2) ** k * math.exp(-0.6) / math.factorial(k),
                                                          rel=1e-14)


def test_box_series_branch():
    B = Box([0, 0], [1, 2])
    t = np.array([1e-9, -3e-8])
    ref = math.prod(-math.expm1(-2 * ti * L) / (2 * ti) for ti, L in zip(t, (1, 2)))
    assert laplace(B, t) == pytest.approx(ref, rel=1e-13)


def test_large_argument_scaled_form_is_finite():
    T = reference_triangle()
    v = scaled_laplace(T, np.array([[800.0, -300.0], [0.0, 1e4]]))
    assert np.all(np.isfinite(v)) and np.all(v > 0)
    # int_0^1 (1 - y) exp(-a y) dy with a = 2e4
    a = 2e4
    assert v[1] == pytest.approx(1 / a + math.expm1(-a) / a ** 2, rel=1e-12)


def test_simplex_against_oracle():
    rng = np.random.default_rng(77)
    for i in range(5):
        S = Simplex(rng.normal(size=(3, 2)))
        t = rng.normal(size=2)
        est, se = mc_laplace(S, t, 400_000, seed=500 + i)
        assert abs(laplace(S, t) - est) <= 4 * se
    S3 = Simplex(rng.normal(size=(4, 3)))
    t = rng.normal(size=3)
    est, se = mc_laplace(S3, t, 400_000, seed=9)
    assert abs(laplace(S3, t) - est) <= 4 * se
