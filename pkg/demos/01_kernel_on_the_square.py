"""Bergman kernel of the tube over the unit square.

The square is fed to the generic polygon pipeline and compared with its
product closed form.  We then walk towards an edge to watch the kernel
blow up, and trace a few sublevel curves {K < M}.
"""
import math

import numpy as np

from floatberg.bergman import kernel, kernel_min, kernel_square_reference, sublevel_boundary
from floatberg.convex_body import uniform_directions, unit_square

square = unit_square()
polygon = square.as_polytope()

print("point            quadrature          closed form         rel err")
for x in ([0.5, 0.5], [0.25, 0.5], [0.1, 0.8], [0.02, 0.3]):
    kv = kernel(polygon, x)
    ref = kernel_square_reference(x)
    print(f"{str(x):16s} {kv.value:.12e} {ref:.12e} {abs(kv.value / ref - 1):.1e}")

# K grows like dist^-2 near a flat edge
print("\ndistance to edge    K * dist^2")
for d in (1e-1, 1e-2, 1e-3, 1e-4):
    x = [d, 0.5]
    print(f"{d:8.0e}            {kernel(polygon, x).value * d * d:.6f}")
print(f"limit               {1 / 16:.6f}  (1/16 at an edge midpoint)")

x0, k0 = kernel_min(square)
print(f"\nminimum at {np.round(x0, 8)}, K = {k0:.12f} (pi^2/16 = {math.pi ** 2 / 16:.12f})")

rays = uniform_directions(2, 8)
for M in (1.0, 2.0, 10.0):
    pts = sublevel_boundary(square, M, rays)
    r = np.linalg.norm(pts - 0.5, axis=1)
    print(f"K < {M:5.1f}: boundary radius from the center in [{r.min():.4f}, {r.max():.4f}]")
