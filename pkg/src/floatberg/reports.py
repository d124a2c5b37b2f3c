"""CSV tables and minimal SVG figures.

Numbers are written with ``repr``-level precision in scientific notation
(``%.17e``) so output files round-trip exactly and are byte-identical for
identical runs.
"""
from __future__ import annotations

import csv
import io

import numpy as np

__all__ = ["fmt", "write_csv", "svg_figure"]


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17e" % float(v)
    return str(v)


def write_csv(path, header, rows):
    """Write rows to ``path`` (or return the text when path is None)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def svg_figure(layers, width=480, height=480, margin=24, title=None):
    """Render planar point sequences as an SVG document.

    Parameters
    ----------
    layers : list of dict
        Each has ``points`` (k, 2) and optionally ``closed`` (bool),
        ``stroke`` (color), ``dots`` (draw markers instead of a line).
    """
    allpts = np.vstack([np.asarray(l["points"], float) for l in layers])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = max(float((hi - lo).max()), 1e-300)
    s = (min(width, height) - 2 * margin) / span

    def xy(p):
        return margin + (p[0] - lo[0]) * s, height - margin - (p[1] - lo[1]) * s

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<title>{title}</title>')
    for layer in layers:
        P = np.asarray(layer["points"], float)
        stroke = layer.get("stroke", "black")
        if layer.get("dots"):
            for p in P:
                x, y = xy(p)
                out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="1.2" fill="{stroke}"/>')
            continue
        coords = " ".join("%.3f,%.3f" % xy(p) for p in P)
        tag = "polygon" if layer.get("closed") else "polyline"
        out.append(f'<{tag} points="{coords}" fill="none" stroke="{stroke}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
