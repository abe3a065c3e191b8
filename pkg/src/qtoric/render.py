"""Deterministic SVG pictures of two-dimensional fans."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .errors import UnsupportedDimension
from .fan import Fan

SIZE = 400
RADIUS = 150.0
PALETTE = ("#cfe3f7", "#f7dccf", "#d8f0d2", "#efe0f5", "#f5f0c8", "#d9d9d9")


def _num(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _direction(fan: Fan, rid: str) -> tuple[float, float]:
    x, y = (float(c) for c in fan.generator(rid))
    norm = math.hypot(x, y)
    return x / norm, y / norm


def render_svg(fan: Fan) -> str:
    """One unit arrow per ray, one shaded wedge per maximal cone, ray ids as labels."""
    if fan.dim != 2:
        raise UnsupportedDimension(f"only two-dimensional fans can be drawn (got dimension {fan.dim})")
    c = SIZE / 2
    dirs = {r.id: _direction(fan, r.id) for r in fan.rays}

    def pt(d, scale=RADIUS):
        # SVG y axis points down
        return c + scale * d[0], c - scale * d[1]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" "
        "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"#222\"/></marker></defs>",
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for k, (name, ids) in enumerate(fan.cones):
        if len(ids) != 2:
            continue
        a, b = (dirs[i] for i in ids)
        # sweep from a to b through the cone (the short way, cones are strictly convex)
        cross = a[0] * b[1] - a[1] * b[0]
        sweep = 1 if cross > 0 else 0
        (x1, y1), (x2, y2) = pt(a), pt(b)
        fill = PALETTE[k % len(PALETTE)]
        out.append(
            f'<path d="M{_num(c)},{_num(c)} L{_num(x1)},{_num(y1)} '
            f'A{_num(RADIUS)},{_num(RADIUS)} 0 0,{sweep} {_num(x2)},{_num(y2)} z" '
            f'fill="{fill}" stroke="none"><title>{escape(name)}</title></path>'
        )
        mid = (a[0] + b[0], a[1] + b[1])
        norm = math.hypot(*mid) or 1.0
        lx, ly = pt((mid[0] / norm, mid[1] / norm), RADIUS * 0.55)
        out.append(
            f'<text x="{_num(lx)}" y="{_num(ly)}" font-family="sans-serif" font-size="12" '
            f'fill="#555" text-anchor="middle">{escape(name)}</text>'
        )
    for r in fan.rays:
        x, y = pt(dirs[r.id])
        out.append(
            f'<line x1="{_num(c)}" y1="{_num(c)}" x2="{_num(x)}" y2="{_num(y)}" '
            f'stroke="#222" stroke-width="2" marker-end="url(#head)"/>'
        )
        lx, ly = pt(dirs[r.id], RADIUS + 18)
        out.append(
            f'<text x="{_num(lx)}" y="{_num(ly + 4)}" font-family="sans-serif" font-size="14" '
            f'text-anchor="middle">{escape(r.id)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
