"""Deterministic SVG rendering of patches (one polygon per tile)."""

from __future__ import annotations

from typing import Optional

from .cyclotomic import to_complex
from .engine import Patch, TilingSpec


def _fmt(x: float) -> str:
    if abs(x) < 5e-13:
        x = 0.0
    return f"{x:.12f}"


def render_svg(
    patch: Patch,
    spec: TilingSpec,
    precision: float = 1e-12,
    orientation_tick: bool = False,
    stroke_width: float = 0.02,
) -> str:
    """Byte-stable SVG document for a patch."""
    polys = []
    xs, ys = [], []
    for tile in patch.tiles:
        pts = []
        for v in spec.tile_vertices(tile):
            re, im, _ = to_complex(v, precision)
            pts.append((re, -im))  # svg y grows downward
            xs.append(re)
            ys.append(-im)
        polys.append((tile.prototile, pts, tile))
    if not polys:
        return '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1"/>\n'
    pad = 0.5
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
        f'<g stroke="#222222" stroke-width="{stroke_width}" stroke-linejoin="round">',
    ]
    for pid, pts, tile in polys:
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        lines.append(f'<polygon fill="{spec.color_of(pid)}" points="{path}"/>')
    if orientation_tick:
        for pid, pts, tile in polys:
            proto = spec.prototiles[pid]
            i = proto.ref_edge % len(pts)
            j = (i + 1) % len(pts)
            ax, ay = pts[i]
            bx, by = pts[j]
            mx, my = (ax + 3 * bx) / 4, (ay + 3 * by) / 4
            lines.append(
                f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(mx)}" y2="{_fmt(my)}"'
                f' stroke="#000000" stroke-width="{stroke_width * 2}"/>'
            )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
