"""
Plane figures (n = 2 only) as plain SVG text.

Layers, bottom to top: VN-space tiles coloured by orbit, arrangement lines,
the V_<=(0) outline (edges used by one piece only), D-points.
Output depends only on its inputs, so a fixed job and seed give identical bytes.
"""

from __future__ import annotations
import logging
import math
from collections import Counter
from fractions import Fraction
from math import ceil, floor
from typing import List, Optional, Sequence, Tuple

from .errors import JobError

logger = logging.getLogger("svg")

SCALE = 100
PALETTE = ("#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#bde0fe", "#ffd6a5", "#caffbf")
LINE_STYLE = 'stroke="#999999" stroke-width="0.6"'
TILE_STYLE = 'stroke="#555555" stroke-width="0.8" fill-opacity="0.55"'
OUTLINE_STYLE = 'stroke="#000000" stroke-width="2.5" fill="none"'
DPOINT_STYLE = 'stroke="#d00000" stroke-width="3" fill="#d00000"'


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _px(p: Sequence, view: int) -> Tuple[str, str]:
    return _num((float(p[0]) + view) * SCALE), _num((view - float(p[1])) * SCALE)


def _ordered(vertices: Sequence[Sequence]) -> List[Sequence]:
    """Counter-clockwise order around the centroid (2-D polygons)."""
    cx = sum(float(v[0]) for v in vertices) / len(vertices)
    cy = sum(float(v[1]) for v in vertices) / len(vertices)
    return sorted(vertices, key=lambda v: (math.atan2(float(v[1]) - cy, float(v[0]) - cx), v))


def _clip_line(a: Fraction, b: Fraction, c: Fraction, view: int) -> Optional[Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]]:
    """Segment of {a x + b y = c} inside [-view, view]^2."""
    pts = set()
    V = Fraction(view)
    if b != 0:
        for x in (-V, V):
            y = (c - a * x) / b
            if -V <= y <= V:
                pts.add((x, y))
    if a != 0:
        for y in (-V, V):
            x = (c - b * y) / a
            if -V <= x <= V:
                pts.add((x, y))
    if len(pts) < 2:
        return None
    ordered = sorted(pts)
    return ordered[0], ordered[-1]


def render(D, region=None, d_pieces: Sequence = (), view: Optional[int] = None) -> str:
    """SVG for a decomposition of the plane; region is V_<=(0), d_pieces are expanded D-point polytopes."""
    if D.dim != 2:
        raise JobError("job-error: SVG output needs n = 2")
    if view is None:
        from config import SVG_VIEWPORT
        view = SVG_VIEWPORT
    from .analysis import expand_pieces

    size = 2 * view * SCALE
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]

    lo, hi = (-view, -view), (view, view)
    out.append('<g id="tiles">')
    for i, rep in enumerate(D.reps):
        colour = PALETTE[i % len(PALETTE)]
        for P in expand_pieces(D, [(i, rep.polytope)], lo, hi):
            pts = " ".join(",".join(_px(v, view)) for v in _ordered(P.vertices))
            out.append(f'<polygon points="{pts}" fill="{colour}" {TILE_STYLE}/>')
    out.append("</g>")

    out.append('<g id="arrangement">')
    for c in D.aha.classes:
        a, b = c.form.coeffs
        corners = [a * x + b * y for x in (-view, view) for y in (-view, view)]
        for k in range(floor(min(corners) / c.step), ceil(max(corners) / c.step) + 1):
            seg = _clip_line(a, b, k * c.step, view)
            if seg is None:
                continue
            (x1, y1), (x2, y2) = _px(seg[0], view), _px(seg[1], view)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {LINE_STYLE}/>')
    out.append("</g>")

    if region is not None:
        edges = Counter()
        for piece in region.pieces:
            for f in piece.space.facets:
                edges[tuple(sorted(f.vertices))] += 1
        out.append('<g id="voronoi">')
        for edge, count in sorted(edges.items()):
            if count != 1:
                continue
            (x1, y1), (x2, y2) = _px(edge[0], view), _px(edge[1], view)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {OUTLINE_STYLE}/>')
        out.append("</g>")

    if d_pieces:
        out.append('<g id="d-points">')
        for P in d_pieces:
            verts = _ordered(P.vertices)
            if len(verts) == 1:
                x, y = _px(verts[0], view)
                out.append(f'<circle cx="{x}" cy="{y}" r="4" {DPOINT_STYLE}/>')
            elif len(verts) == 2:
                (x1, y1), (x2, y2) = _px(verts[0], view), _px(verts[1], view)
                out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {DPOINT_STYLE}/>')
            else:
                pts = " ".join(",".join(_px(v, view)) for v in verts)
                out.append(f'<polygon points="{pts}" {DPOINT_STYLE}/>')
        out.append("</g>")

    out.append("</svg>")
    logger.debug("svg with %d elements", len(out))
    return "\n".join(out) + "\n"
