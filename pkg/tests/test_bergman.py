import math

import numpy as np
import pytest
from scipy import integrate

from floatberg.bergman import (kernel, kernel_bounds, kernel_box_reference,
                               kernel_interval_reference, kernel_min, kernel_square_reference,
                               sublevel_boundary, sublevel_member)
from floatberg.convex_body import (Box, Ellipsoid, Polytope, affine_image, ball,
                                   reference_triangle, uniform_directions, unit_square)
from floatberg.errors import (IndeterminateAtTolerance, MBelowMinimum, PointOutsideBody,
                              QuadratureNotConverged)
from floatberg.oracle import sample_body
from floatberg.quadrature import QuadratureConfig

CFG = QuadratureConfig()
EPS = CFG.rel_tol


def test_square_closed_form_examples():
    assert kernel_square_reference([0.5, 0.5]) == pytest.approx(math.pi ** 2 / 16)
    assert kernel_square_reference([0.25, 0.5]) == pytest.approx(math.pi ** 2 / 8)
    assert kernel_square_reference([1e-4, 0.5]) > 1e6
    assert kernel_square_reference([0.3, 0.7]) == pytest.approx(kernel_square_reference([0.7, 0.7]))


def test_square_quadrature_examples(square):
    assert kernel(square, [0.5, 0.5]).value == pytest.approx(math.pi ** 2 / 16, rel=1e-8)
    assert kernel(square, [0.25, 0.5]).value == pytest.approx(math.pi ** 2 / 8, rel=1e-8)


def _interval_kernel_by_scipy(y):
    # (2 pi)^-1 int exp(-2 y t) / J(t) dt with J(t) = (1 - e^{-2t}) / (2t)
    def f(t):
        J = -math.expm1(-2 * t) / (2 * t) if t != 0 else 1.0
        return math.exp(-2 * y * t) / J
    total = sum(integrate.quad(f, a, b, epsabs=0, epsrel=1e-13, limit=200)[0]
                for a, b in [(-200, -20), (-20, 0), (0, 20), (20, 200)])
    return total / (2 * math.pi)


def test_interval_kernel():
    I = Box([0.0], [1.0])
    assert kernel(I, [0.5]).value == pytest.approx(math.pi / 4, rel=1e-10)
    for y in (0.5, 0.2, 0.93):
        ref = _interval_kernel_by_scipy(y)
        assert kernel(I, [y]).value == pytest.approx(ref, rel=1e-9)
        assert kernel_interval_reference(y) == pytest.approx(ref, rel=1e-9)
    # an ellipsoid in one dimension is an interval
    assert kernel(Ellipsoid([0.5], [[0.5]]), [0.5]).value == pytest.approx(math.pi / 4, rel=1e-10)


def test_box_factorizes():
    B = Box([0, -1, 2], [1, 2, 2.5])
    x = np.array([0.3, 0.1, 2.2])
    expect = math.prod(kernel(Box([lo], [hi]), [xi]).value
                       for lo, hi, xi in zip(B.lo, B.hi, x))
    assert kernel(B, x).value == pytest.approx(expect, rel=2 * EPS)
    assert kernel(B, x).value == pytest.approx(kernel_box_reference(B, x[None])[0], rel=2 * EPS)


def test_generic_quadrature_on_square_polygon():
    P = unit_square().as_polytope()
    for x in ([0.5, 0.5], [0.1, 0.8], [0.003, 0.3], [0.97, 0.02]):
        kv = kernel(P, x)
        assert kv.value == pytest.approx(kernel_square_reference(x), rel=EPS)
        assert 0 <= kv.error <= EPS * kv.value
        assert kv.radius > 0


def test_positivity_and_symmetry(triangle, disk):
    rng = np.random.default_rng(1)
    for x in sample_body(triangle, 5, 3):
        a = kernel(triangle, x).value
        b = kernel(triangle, x[::-1]).value
        assert a > 0 and a == pytest.approx(b, rel=2 * EPS)
    for x in rng.uniform(-0.6, 0.6, size=(4, 2)):
        R = np.array([[0, -1], [1, 0]])
        assert kernel(disk, x).value == pytest.approx(kernel(disk, R @ x).value, rel=2 * EPS)


def test_monotonicity_under_inclusion(square, triangle):
    # T in S in 2T, so K_2T < K_S < K_T on T
    Tt = reference_triangle(2.0)
    for c in sample_body(triangle, 20, 17):
        kt = kernel(triangle, c)
        ks = kernel(square, c)
        ktt = kernel(Tt, c)
        assert ktt.value + ktt.error < ks.value - ks.error
        assert ks.value + ks.error < kt.value - kt.error


@pytest.mark.parametrize("A", [np.diag([2.0, 0.5]), np.array([[1.0, 0.5], [0.0, 1.0]]),
                               np.array([[1.2, -0.3], [0.4, 0.9]])])
def test_transformation_law(A, square, triangle):
    b = np.array([0.3, -1.0])
    det2 = np.linalg.det(A) ** 2
    for body in (square, triangle):
        image = affine_image(body, A, b)
        for x in sample_body(body, 3, 5):
            lhs = kernel(image, A @ x + b).value * det2
            assert lhs == pytest.approx(kernel(body, x).value, rel=5 * EPS)


def test_boundary_blow_up(square):
    u = np.array([0.8, 0.6])
    c = np.array([0.5, 0.5])
    # the ray leaves the square at s = 0.625 through the edge x = 1
    for s in (0.62, 0.624, 0.6245):
        x = c + s * u
        dist = 1.0 - x[0]
        kv = kernel(square, x)
        assert kv.value == pytest.approx(kernel_square_reference(x), rel=EPS)
        if dist < 5e-3:
            assert kv.value > 1e4


def test_log_convexity(triangle):
    X = sample_body(triangle, 10, 23)
    for a, b in zip(X[::2], X[1::2]):
        ka, kb = kernel(triangle, a).value, kernel(triangle, b).value
        km = kernel(triangle, 0.5 * (a + b)).value
        assert math.log(km) <= 0.5 * (math.log(ka) + math.log(kb)) + 5 * EPS


def test_point_outside(square):
    with pytest.raises(PointOutsideBody):
        kernel(square, [1.0, 0.5])
    with pytest.raises(PointOutsideBody):
        kernel(square, [2.0, 0.5])


def test_not_converged_is_reported(triangle):
    cfg = QuadratureConfig(rel_tol=1e-13, trunc_tol=1e-15, max_subdivisions=1, nodes=4)
    kv = kernel(triangle, [1e-4, 0.3], cfg, strict=False)
    assert not kv.converged and kv.error > 0
    with pytest.raises(QuadratureNotConverged):
        kernel(triangle, [1e-4, 0.3], cfg)


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=1e-10, trunc_tol=1e-8)
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=-1)


def test_sublevel_member(square):
    assert sublevel_member(square, [0.5, 0.5], 1.0)
    assert not sublevel_member(square, [0.5, 0.5], 0.5)
    assert not sublevel_member(square, [1.5, 0.5], 10.0)
    k = kernel(square, [0.3, 0.4]).value
    with pytest.raises(IndeterminateAtTolerance):
        sublevel_member(square, [0.3, 0.4], k)
    assert sublevel_member(square, [0.3, 0.4], 2 * k)


def test_sublevel_boundary_square(square):
    rays = uniform_directions(2, 16)
    M = 2.0
    pts = sublevel_boundary(square, M, rays)
    ref = np.array([kernel_square_reference(p) for p in pts])
    assert np.all(np.abs(ref - M) <= 1e-6 * M)
    # nesting: smaller M gives a smaller curve
    inner = sublevel_boundary(square, 1.0, rays)
    c = np.array([0.5, 0.5])
    assert np.all(np.linalg.norm(inner - c, axis=1) < np.linalg.norm(pts - c, axis=1))
    tiny = sublevel_boundary(square, math.pi ** 2 / 16 * (1 + 1e-6), rays)
    assert np.linalg.norm(tiny - c, axis=1).max() < 1e-2
    with pytest.raises(MBelowMinimum):
        sublevel_boundary(square, 0.5, rays)


def test_kernel_min_square_and_disk(square, disk):
    x, k = kernel_min(square)
    assert np.allclose(x, 0.5, atol=1e-6)
    assert k == pytest.approx(math.pi ** 2 / 16, rel=1e-8)
    x, k = kernel_min(disk)
    assert np.allclose(x, 0, atol=1e-6)


@pytest.mark.slow
def test_kernel_min_scales_under_doubling(triangle):
    x1, k1 = kernel_min(triangle)
    x2, k2 = kernel_min(reference_triangle(2.0))
    assert np.allclose(x1, [1 / 3, 1 / 3], atol=1e-6)
    assert np.allclose(x2, 2 * x1, atol=1e-6)
    # |det A|^2 = 16 for the doubling map
    assert k2 == pytest.approx(k1 / 16, rel=1e-7)


def test_kernel_bounds_bracket_quadrature(triangle, disk, pentagon):
    for body in (triangle, disk, pentagon, Ellipsoid([0.2, 0.1], [[1.0, 0.3], [0.0, 0.5]])):
        X = sample_body(body, 15, 31)
        lo, hi = kernel_bounds(body, X)
        for x, l, h in zip(X, lo, hi):
            k = kernel(body, x).value
            assert l <= k * (1 + 1e-9) and k <= h * (1 + 1e-9)
    # the square is its own bound
    lo, hi = kernel_bounds(unit_square(), [[0.3, 0.6]])
    assert lo[0] == hi[0] == pytest.approx(kernel_square_reference([0.3, 0.6]))


def test_ball_kernel_at_center_3d():
    # radial reduction: J(s) = 4 pi (y cosh y - sinh y) / y^3 with y = 2 s
    def f(s):
        y = 2 * s
        J = 4 * math.pi * (y * math.cosh(y) - math.sinh(y)) / y ** 3 if y > 1e-3 else 4 * math.pi / 3
        return 4 * math.pi * s * s / J
    ref = integrate.quad(f, 0, 60, epsabs=0, epsrel=1e-12, limit=200)[0] / (2 * math.pi) ** 3
    assert kernel(ball(3), [0, 0, 0]).value == pytest.approx(ref, rel=1e-8)


@pytest.mark.slow
def test_cube_as_polytope_3d():
    C = Box([0, 0, 0], [1, 1, 1])
    x = np.array([0.2, 0.7, 0.4])
    kv = kernel(C.as_polytope(), x, QuadratureConfig(rel_tol=1e-6))
    ref = kernel_box_reference(C, x[None])[0]
    assert kv.value == pytest.approx(ref, rel=1e-6)
    assert abs(kv.value - ref) <= kv.error + 1e-12 * ref
