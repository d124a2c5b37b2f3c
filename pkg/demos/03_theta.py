"""Boundary extrema of delta^2 K on floating bodies, and theta.

For each delta the kernel is evaluated at the section barycenters, which
sample the boundary of the floating body.  The minimum and maximum of
delta^2 K are extrapolated to delta -> 0.  The square and the triangle
approach 1/(4 pi^2) and 1/16, so theta tends to 4/pi^2.  The disk is
rotationally symmetric, so the kernel is constant on every floating
body boundary and theta is 1 at every delta.
"""
import math

from floatberg.convex_body import ball, reference_triangle, uniform_directions, unit_square
from floatberg.invariants import theta_estimate

deltas = [0.02, 0.01, 0.005]
print(f"targets: l = {1 / (4 * math.pi ** 2):.5f}, u = {1 / 16:.5f}, "
      f"theta = {4 / math.pi ** 2:.5f}")
for name, body, k in [("square", unit_square(), 720), ("triangle", reference_triangle(), 180)]:
    rep = theta_estimate(body, deltas, uniform_directions(2, k))
    for d, L, U in zip(rep.deltas, rep.L, rep.U):
        print(f"{name:8s} delta={d:<6} L={L:.5f} U={U:.5f} L/U={L / U:.5f}")
    print(f"{name:8s} extrapolated l={rep.ell_hat:.5f} u={rep.u_hat:.5f} "
          f"theta={rep.theta_hat:.5f} (band {rep.band:.1e})")

rep = theta_estimate(ball(2), [0.05, 0.02], uniform_directions(2, 90))
print(f"disk     L/U per delta: {rep.theta}")
