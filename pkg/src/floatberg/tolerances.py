"""Fixed numerical tolerances shared by every module.

Kept in one frozen record so acceptance runs are reproducible; nothing in
the package reads tolerances from anywhere else.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unit_vector: float = 1e-12
    containment: float = 1e-12
    polytope_consistency: float = 1e-10
    symmetry: float = 1e-10
    cut_residual: float = 1e-12      # relative to body volume
    bisection_max_iter: int = 200
    cap_quadrature: float = 1e-12
    mvee_gap: float = 1e-7
    mvee_max_iter: int = 100_000
    barycenter_on_plane: float = 1e-10
    radial_bisection: float = 1e-9
    sublevel_radial: float = 1e-8
    divided_difference_merge: float = 1e-2
    taylor_order: int = 6
    box_series: float = 1e-6
    golden_step: float = 1e-9


TOL = Tolerances()
