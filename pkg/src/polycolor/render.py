"""Deterministic SVG drawings of point sets, Delaunay edges and homothets.

Floats appear here only, for output coordinates.
"""

from __future__ import annotations

from fractions import Fraction

CANVAS = 600
MARGIN = 30
PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def render_svg(points, edges=(), colors=None, outlines=(), title: str = "") -> str:
    """Points (exact pairs), edges (index pairs), per-point colors and
    polygon outlines (lists of exact vertices) as an SVG 1.1 document."""
    pts = [(Fraction(p[0]), Fraction(p[1])) for p in points]
    every = pts + [(Fraction(x), Fraction(y)) for poly in outlines for x, y in poly]
    if every:
        xmin = min(p[0] for p in every)
        xmax = max(p[0] for p in every)
        ymin = min(p[1] for p in every)
        ymax = max(p[1] for p in every)
    else:
        xmin = ymin = Fraction(0)
        xmax = ymax = Fraction(1)
    span = max(xmax - xmin, ymax - ymin) or Fraction(1)
    k = Fraction(CANVAS - 2 * MARGIN) / span

    def tx(p):
        return (float(MARGIN + (p[0] - xmin) * k), float(CANVAS - MARGIN - (p[1] - ymin) * k))

    palette = {}
    if colors is not None:
        for c in sorted(set(colors), key=str):
            palette[c] = PALETTE[len(palette) % len(PALETTE)]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f"<!-- canvas transform: X = {MARGIN} + (x - ({xmin})) * {k}, "
        f"Y = {CANVAS - MARGIN} - (y - ({ymin})) * {k} -->",
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append('<rect width="100%" height="100%" fill="white"/>')
    for poly in outlines:
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in map(tx, poly))
        out.append(f'<polygon points="{coords}" fill="none" stroke="#444" stroke-dasharray="6,4"/>')
    for u, v in edges:
        (x1, y1), (x2, y2) = tx(pts[u]), tx(pts[v])
        out.append(f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
                   f'stroke="#999" stroke-width="1.5"/>')
    for i, p in enumerate(pts):
        x, y = tx(p)
        fill = palette[colors[i]] if colors is not None else "#000"
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="5" fill="{fill}"><title>{i}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
