"""Command-line front end.

    floatberg kernel    --body B.json --point 0.5,0.5 [--point ...]
    floatberg floatbody --body B.json --delta 0.02 [--format svg]
    floatberg theta     --body B.json --deltas 0.02,0.01,0.005
    floatberg verify    --body B.json --delta 0.01
    floatberg figure    --body B.json --delta 0.05 --out fig.svg [--kind floating|scheme|nesting]

Exit status: 0 on success, 1 if a check is violated, 2 on bad input.
The worker pool size is capped by the FLOATBERG_THREADS environment variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import reports
from .bergman import QuadratureConfig, kernel_many
from .convex_body import (Box, Ellipsoid, Polytope, Simplex, body_from_dict, contains,
                          default_direction_count, is_symmetric, reference_triangle,
                          section_barycenter, unit_square, uniform_directions, CutSpec,
                          cut_depth, support)
from .errors import FloatbergError
from .floating_body import build
from .invariants import (affine_invariance_check, blocki_consequence_check, nazarov_check,
                         sandwich_check, theta_estimate)


class InputError(Exception):
    """Bad command-line input; maps to exit status 2."""


def _floats(text, field):
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"{field}: cannot parse {text!r} as comma-separated numbers") from None
    if not vals:
        raise InputError(f"{field}: empty list")
    return vals


def _load_body(path):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise InputError(f"--body: cannot read {path!r} ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"--body: {path!r} is not valid JSON ({exc.msg})") from None
    if not isinstance(spec, dict):
        raise InputError("--body: top level must be an object with a 'type' field")
    try:
        return body_from_dict(spec)
    except (FloatbergError, ValueError, TypeError) as exc:
        raise InputError(f"--body: {exc}") from None


def _workers():
    raw = os.environ.get("FLOATBERG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"FLOATBERG_THREADS: expected an integer, got {raw!r}") from None


def _cfg(args):
    try:
        return QuadratureConfig(rel_tol=args.tol, trunc_tol=args.trunc)
    except ValueError as exc:
        raise InputError(f"--tol/--trunc: {exc}") from None


def _directions(args, body):
    count = args.directions or default_direction_count(body.dim)
    if count < 1:
        raise InputError("--directions: must be positive")
    return uniform_directions(body.dim, count)


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _outline(body, k=360):
    if isinstance(body, Ellipsoid):
        th = np.linspace(0, 2 * np.pi, k, endpoint=False)
        return body.center + np.column_stack([np.cos(th), np.sin(th)]) @ body.shape.T
    return body.as_polytope().vertices


# ------------------------------------------------------------ commands

def cmd_kernel(args):
    body = _load_body(args.body)
    if not args.point:
        raise InputError("--point: at least one point is required")
    X = np.array([_floats(p, "--point") for p in args.point])
    if X.shape[1] != body.dim:
        raise InputError(f"--point: expected {body.dim} coordinates")
    bad = np.flatnonzero(~contains(body, X))
    if bad.size:
        raise InputError(f"--point: {X[bad[0]].tolist()} is not interior to the body")
    kv = kernel_many(body, X, _cfg(args), _workers())
    head = [f"x{i}" for i in range(body.dim)] + ["K", "err", "radius", "converged"]
    rows = [list(k.x) + [k.value, k.error, k.radius, k.converged] for k in kv]
    _emit(args, reports.write_csv(None, head, rows))
    return 0


def cmd_floatbody(args):
    body = _load_body(args.body)
    delta = _single_delta(args)
    fba = build(body, delta, _directions(args, body))
    if args.format == "svg":
        if body.dim != 2:
            raise InputError("--format svg: figures are planar only")
        _emit(args, reports.svg_figure([
            {"points": _outline(body), "closed": True},
            {"points": fba.barycenters, "closed": True, "stroke": "crimson"}]))
        return 0
    n = body.dim
    head = [f"v{i}" for i in range(n)] + ["r"] + [f"b{i}" for i in range(n)]
    rows = [list(v) + [r] + list(b) for v, r, b in
            zip(fba.directions, fba.offsets, fba.barycenters)]
    _emit(args, reports.write_csv(None, head, rows))
    return 0


def cmd_theta(args):
    body = _load_body(args.body)
    if args.deltas is None:
        raise InputError("--deltas: required")
    deltas = sorted(_floats(args.deltas, "--deltas"), reverse=True)
    rep = theta_estimate(body, deltas, _directions(args, body), _cfg(args), _workers())
    rows = [[d, L, U, L / U, p, f] for d, L, U, p, f in
            zip(rep.deltas, rep.L, rep.U, rep.points, rep.flagged)]
    rows.append(["limit", rep.ell_hat, rep.u_hat, rep.theta_hat, int(rep.points.sum()),
                 int(rep.flagged.sum())])
    _emit(args, reports.write_csv(None, ["delta", "L", "U", "theta", "points", "flagged"], rows))
    return 0 if rep.ok else 1


def cmd_verify(args):
    body = _load_body(args.body)
    delta = _single_delta(args)
    cfg, workers = _cfg(args), _workers()
    W = _directions(args, body)
    rows = []
    sw = sandwich_check(body, delta, W, cfg, args.samples, args.seed, workers)
    rows += [["sandwich_lower_violations", sw.violations_lower, 0, sw.violations_lower == 0],
             ["sandwich_upper_violations", sw.violations_upper, 0, sw.violations_upper == 0],
             ["sandwich_indeterminate", sw.indeterminate, 0, sw.indeterminate == 0],
             ["L_lower_bound", sw.L_range[0], sw.ell, sw.L_range[0] >= sw.ell],
             ["U_upper_bound", sw.U_range[1], sw.u, sw.U_range[1] <= sw.u]]
    bl = blocki_consequence_check(body, delta, W, cfg, workers=workers)
    rows.append(["blocki_min", bl.min_lower, bl.threshold, bl.ok])
    if is_symmetric(body):
        nz = nazarov_check(body, cfg)
        rows.append(["nazarov_ratio", nz.ratio, 1.0, nz.ratio - nz.error / nz.bound <= 1.0])
        rows.append(["santalo_product", nz.santalo, nz.santalo_bound,
                     nz.santalo <= nz.santalo_bound * (1 + 1e-9)])
    if body.dim == 2:
        shear = np.array([[1.0, 0.5], [0.0, 1.0]])
        af = affine_invariance_check(body, shear, None, delta, W, cfg, seed=args.seed)
        rows.append(["kernel_law_max_rel_dev", af.kernel_max_rel_dev, af.kernel_tol,
                     af.kernel_max_rel_dev <= af.kernel_tol])
        rows.append(["floating_body_radial_gap", af.radial_gap, af.gap_tol,
                     af.radial_gap <= af.gap_tol])
        rows.append(["floating_body_mismatches", af.membership_mismatches, 0,
                     af.membership_mismatches == 0])
    _emit(args, reports.write_csv(None, ["check", "value", "threshold", "passed"], rows))
    return 0 if all(r[-1] for r in rows) else 1


def _scheme_layers(body, delta):
    N = np.array([0.0, 1.0])
    r = cut_depth(body, N, delta)
    h = support(body, N)
    P = _outline(body)
    lo, hi = P[:, 0].min(), P[:, 0].max()
    b = section_barycenter(body, CutSpec(N, r))
    return [{"points": P, "closed": True},
            {"points": [[lo, r], [hi, r]], "stroke": "crimson"},
            {"points": [[lo, h], [hi, h]], "stroke": "gray"},
            {"points": [b], "dots": True, "stroke": "crimson"}]


def _nesting_layers(delta):
    S = unit_square()
    T = reference_triangle()
    Tt = reference_triangle(2.0)
    # one eighth of the square's floating-body boundary: y = delta / (2x)
    x = np.linspace(np.sqrt(delta / 2), 0.5, 200)
    C = np.column_stack([x, delta / (2 * x)])
    return [{"points": _outline(Tt), "closed": True, "stroke": "gray"},
            {"points": _outline(S), "closed": True},
            {"points": _outline(T), "closed": True, "stroke": "steelblue"},
            {"points": C, "stroke": "crimson"}]


def cmd_figure(args):
    delta = _single_delta(args)
    if args.kind == "nesting":
        layers = _nesting_layers(delta)
    else:
        body = _load_body(args.body)
        if body.dim != 2:
            raise InputError("--body: figures are planar only")
        if args.kind == "scheme":
            layers = _scheme_layers(body, delta)
        else:
            fba = build(body, delta, _directions(args, body))
            layers = [{"points": _outline(body), "closed": True},
                      {"points": fba.barycenters, "closed": True, "stroke": "crimson"}]
    _emit(args, reports.svg_figure(layers, title=f"{args.kind} delta={delta}"))
    return 0


def _single_delta(args):
    if args.delta is None:
        raise InputError("--delta: required")
    if not args.delta > 0:
        raise InputError("--delta: must be positive")
    return args.delta


# ------------------------------------------------------------ parser

def make_parser():
    p = argparse.ArgumentParser(prog="floatberg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, body_required=True):
        sp.add_argument("--body", required=body_required, help="body JSON file")
        sp.add_argument("--delta", type=float)
        sp.add_argument("--deltas", help="comma-separated delta grid")
        sp.add_argument("--directions", type=int, help="direction grid size")
        sp.add_argument("--tol", type=float, default=1e-8, help="relative kernel tolerance")
        sp.add_argument("--trunc", type=float, default=1e-14, help="radial truncation level")
        sp.add_argument("--samples", type=int, default=10_000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=["csv", "svg"], default="csv")

    for name, fn in [("kernel", cmd_kernel), ("floatbody", cmd_floatbody),
                     ("theta", cmd_theta), ("verify", cmd_verify)]:
        sp = sub.add_parser(name)
        common(sp)
        if name == "kernel":
            sp.add_argument("--point", action="append", help="comma-separated point")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("figure")
    common(sp, body_required=False)
    sp.add_argument("--kind", choices=["floating", "scheme", "nesting"], default="floating")
    sp.set_defaults(func=cmd_figure, format="svg")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "figure" and args.kind != "nesting" and not args.body:
            raise InputError("--body: required for this figure")
        return args.func(args)
    except InputError as exc:
        print(f"floatberg: error: {exc}", file=sys.stderr)
        return 2
    except FloatbergError as exc:
        print(f"floatberg: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
