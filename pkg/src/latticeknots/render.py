"""SVG pictures of lattice polygons with gaps in under-strands."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .knot_id import SHEAR_SCHEDULE, project
from .lattice import SH, VERTICAL, Polygon, vertices

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")
VERTICAL_COLOUR = "#7f7f7f"
GAP = 0.18  # half-width of an under-strand gap, in drawing units
SCALE = 40.0


def _planar(p: Polygon, q) -> tuple[int, int]:
    a, b, _ = q
    return (2 * a + b, b) if p.lattice == SH else (a, b)


def _to_xy(p: Polygon, uv) -> tuple[float, float]:
    u, v = uv
    if p.lattice == SH:
        return float(u) / 2.0, float(v) * math.sqrt(3) / 2.0
    return float(u), float(v)


def _segments(p: Polygon, shear):
    e1, e2 = shear
    out = []
    vs = vertices(p)
    for i in range(len(p.sticks)):
        (u0, v0), (u1, v1) = _planar(p, vs[i]), _planar(p, vs[i + 1])
        c0, c1 = vs[i][2], vs[i + 1][2]
        out.append(((Fraction(u0) - e1 * c0, Fraction(v0) - e2 * c0), (Fraction(u1) - e1 * c1, Fraction(v1) - e2 * c1)))
    return out


def _flat_crossings(p: Polygon):
    """Under-strand positions for the straight vertical view (vertical sticks shrink to points)."""
    vert = VERTICAL[p.lattice]
    segs = _segments(p, (Fraction(0), Fraction(0)))
    vs = vertices(p)
    out = []
    n = len(segs)
    for i in range(n):
        if p.sticks[i].dir == vert:
            continue
        for j in range(i + 1, n):
            if p.sticks[j].dir == vert or vs[i][2] == vs[j][2]:
                continue
            (a0, a1), (b0, b1) = segs[i], segs[j]
            r = (a1[0] - a0[0], a1[1] - a0[1])
            s = (b1[0] - b0[0], b1[1] - b0[1])
            d = r[0] * s[1] - r[1] * s[0]
            if d == 0:
                continue
            w = (b0[0] - a0[0], b0[1] - a0[1])
            t = (w[0] * s[1] - w[1] * s[0]) / d
            u = (w[0] * r[1] - w[1] * r[0]) / d
            if 0 < t < 1 and 0 < u < 1:
                under, tu = (i, t) if vs[i][2] < vs[j][2] else (j, u)
                out.append((under, tu))
    return out


def render_svg(p: Polygon, plane: str = "xy") -> str:
    """Deterministic SVG text; ``plane`` is "xy" (straight down) or "tilt" (the classifier's view)."""
    if plane not in ("xy", "tilt"):
        raise ValueError(f"unknown plane {plane!r}")
    if plane == "tilt":
        d = project(p)
        shear = d.shear
        gaps = [c.under_strand for c in d.crossings]
    else:
        shear = SHEAR_SCHEDULE[0]
        gaps = _flat_crossings(p)
    segs = _segments(p, shear)
    vs = vertices(p)
    vert = VERTICAL[p.lattice]
    levels = sorted({q[2] for q in vs})
    colour = {h: PALETTE[i % len(PALETTE)] for i, h in enumerate(levels)}
    pts = [_to_xy(p, a) for a, _ in segs] or [(0.0, 0.0)]
    xs = [q[0] for q in pts]
    ys = [q[1] for q in pts]
    pad = 1.0
    x0, y0 = min(xs) - pad, min(ys) - pad
    width, height = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad

    def fmt(x: float, y: float) -> str:
        # flip y so the picture reads with y upwards
        return f"{(x - x0) * SCALE:.2f},{(height - (y - y0)) * SCALE:.2f}"

    by_stick: dict[int, list] = {}
    for i, t in gaps:
        by_stick.setdefault(i, []).append(Fraction(t))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width * SCALE:.2f}" height="{height * SCALE:.2f}" '
        f'viewBox="0 0 {width * SCALE:.2f} {height * SCALE:.2f}" data-crossings="{len(gaps)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for i, (a, b) in enumerate(segs):
        A, B = _to_xy(p, a), _to_xy(p, b)
        length = math.hypot(B[0] - A[0], B[1] - A[1])
        if p.sticks[i].dir == vert:
            col = VERTICAL_COLOUR
        else:
            col = colour[vs[i][2]]
        if length == 0:
            cx, cy = fmt(*A).split(",")
            lines.append(f'<circle class="vertical" cx="{cx}" cy="{cy}" r="4" fill="{col}"/>')
            continue
        cuts = sorted(float(t) for t in by_stick.get(i, []))
        pieces = []
        start = 0.0
        g = GAP / length
        for t in cuts:
            pieces.append((start, max(start, t - g)))
            start = min(1.0, t + g)
        pieces.append((start, 1.0))
        for s0, s1 in pieces:
            if s1 <= s0:
                continue
            P = (A[0] + s0 * (B[0] - A[0]), A[1] + s0 * (B[1] - A[1]))
            Q = (A[0] + s1 * (B[0] - A[0]), A[1] + s1 * (B[1] - A[1]))
            lines.append(
                f'<polyline class="stick" data-stick="{i}" points="{fmt(*P)} {fmt(*Q)}" '
                f'stroke="{col}" stroke-width="4" fill="none" stroke-linecap="round"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def gap_count(svg: str) -> Optional[int]:
    marker = 'data-crossings="'
    k = svg.find(marker)
    if k < 0:
        return None
    return int(svg[k + len(marker) : svg.index('"', k + len(marker))])
