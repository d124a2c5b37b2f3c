import numpy as np
import pytest
from scipy.spatial import ConvexHull

from floatberg.convex_body import (Box, Polytope, ball, john_inner, reference_triangle,
                                   uniform_directions, unit_square)

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_pentagon(seed=11):
    """Convex pentagon with jittered vertices on a circle."""
    rng = np.random.default_rng(seed)
    th = 2 * np.pi * np.arange(5) / 5 + rng.uniform(-0.3, 0.3, 5)
    r = rng.uniform(0.8, 1.2, 5)
    P = Polytope.from_vertices(np.column_stack([r * np.cos(th), r * np.sin(th)]))
    assert len(P.vertices) == 5
    return P


def random_symmetric_polygon(rng, k=None):
    k = k or int(rng.integers(2, 6))
    P = rng.normal(size=(k, 2))
    return Polytope.from_vertices(np.vstack([P, -P]))


def john_containment(P, E):
    """inner(E) inside conv(P) inside E, the inner one shrunk by 1e-6."""
    n = P.shape[1]
    U = (P - E.center) @ np.linalg.inv(E.shape).T
    outer_ok = np.linalg.norm(U, axis=1).max() <= 1 + 1e-7
    inner = john_inner(E, n)
    W = uniform_directions(n, 400 if n == 2 else 1000)
    B = inner.center + (1 - 1e-6) * W @ inner.shape.T
    H = ConvexHull(P)
    inner_ok = np.all(B @ H.equations[:, :-1].T + H.equations[:, -1] <= 0)
    return bool(outer_ok and inner_ok)


@pytest.fixture
def square():
    return unit_square()


@pytest.fixture
def triangle():
    return reference_triangle()


@pytest.fixture
def disk():
    return ball(2)


@pytest.fixture
def centered_square():
    return Box([-1.0, -1.0], [1.0, 1.0])


@pytest.fixture
def pentagon():
    return random_pentagon()
