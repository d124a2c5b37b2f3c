"""Convex floating bodies of the square, triangle and disk.

Each floating body is the intersection of half-planes whose caps have
area delta.  The cut family is compared with the exact sets where they
are known, and the wet part is measured by Monte Carlo.  An SVG of the
square's floating body is written next to this script.
"""
from pathlib import Path

import numpy as np

from floatberg import reports
from floatberg.convex_body import ball, reference_triangle, uniform_directions, unit_square
from floatberg.floating_body import (build, radial_gap, reference_member_square,
                                     reference_member_triangle, wet_volume)

delta = 0.02
W = uniform_directions(2, 720)
square, triangle, disk = unit_square(), reference_triangle(), ball(2)

for name, body, ref, c in [
        ("square", square, reference_member_square, [0.5, 0.5]),
        ("triangle", triangle, reference_member_triangle, [1 / 3, 1 / 3])]:
    fba = build(body, delta, W)
    for k in (8, 90, 720):
        approx = fba if k == 720 else build(body, delta, uniform_directions(2, k))
        gap = radial_gap(approx, lambda p: ref(p, delta), c, uniform_directions(2, 180))
        print(f"{name:8s} {k:4d} directions: radial gap to the exact set {gap:.2e}")

fba = build(disk, delta, W)
r = np.linalg.norm(fba.barycenters, axis=1)
print(f"disk: barycenter radii in [{r.min():.10f}, {r.max():.10f}]")

print("\nwet area of the disk (Monte Carlo, 2e5 samples)")
for d in (0.005, 0.02, 0.1, 0.5):
    est, se = wet_volume(disk, d, build(disk, d, W), samples=200_000, seed=1)
    print(f"  delta={d:<6} {est:.5f} +- {se:.5f}")

out = Path(__file__).with_name("square_floating_body.svg")
layers = [{"points": square.as_polytope().vertices, "closed": True}]
for d, color in [(0.01, "steelblue"), (0.05, "crimson"), (0.15, "darkorange")]:
    layers.append({"points": build(square, d, W).barycenters, "closed": True, "stroke": color})
out.write_text(reports.svg_figure(layers, title="floating bodies of the square"))
print(f"\nwrote {out.name}")
