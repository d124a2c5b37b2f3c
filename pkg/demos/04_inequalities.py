"""Dimensional inequalities and small-cap limits in the plane.

* Kernel at the center of symmetric bodies against the polar-volume
  bound, with the Blaschke-Santalo product alongside.
* Sampled sandwich test: points with small kernel are inside the
  floating body, and members of the floating body have moderate kernel.
* Disk limits: cap width against cap area, and dist^3 K near the boundary.
"""
import math

import numpy as np

from floatberg.convex_body import Box, Polytope, ball, reference_triangle
from floatberg.invariants import (constants, hormander_limit_check, nazarov_check,
                                  sandwich_check, scwe_limit_check)

c = constants(2)
print(f"planar constants: l_2={c.ell}, u_2={c.u:g}, a_2={c.a:.7f}, theta_lower={c.theta_lower}")

rng = np.random.default_rng(0)
bodies = {"disk": ball(2), "[-1,1]^2": Box([-1, -1], [1, 1])}
for i in range(3):
    P = rng.normal(size=(3, 2))
    bodies[f"random #{i}"] = Polytope.from_vertices(np.vstack([P, -P]))
for name, E in bodies.items():
    nz = nazarov_check(E)
    print(f"{name:10s} K(0)={nz.kernel_at_origin:.6f} bound={nz.bound:.6f} "
          f"ratio={nz.ratio:.4f} santalo={nz.santalo:.4f} (<= {math.pi ** 2:.4f})")

for name, body in [("triangle", reference_triangle()), ("disk", ball(2))]:
    rep = sandwich_check(body, 0.01, samples=5000, seed=2)
    print(f"sandwich {name:8s}: {rep.members} members of {rep.samples}, violations "
          f"{rep.violations_lower}/{rep.violations_upper}, "
          f"certified bracket of delta^2 K on the boundary [{rep.L_range[0]:.4f}, {rep.U_range[1]:.4f}]")

rep = scwe_limit_check(ball(2), [1e-2, 1e-3, 1e-4, 1e-5])
for d, v in zip(rep.parameters, rep.values):
    print(f"cap ratio delta={d:.0e}: {v:.6f} (limit {rep.target:.6f})")
rep = hormander_limit_check(ball(2))
for d, v in zip(rep.parameters, rep.values):
    print(f"d^3 K d={d:<5}: {v:.6f} (limit {rep.target:.6f})")
