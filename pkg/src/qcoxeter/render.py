"""SVG pictures of rank-2 alcove tilings.

Points in coroot coordinates are mapped to the plane through a Cholesky
factor of the invariant Gram matrix, so lengths and angles are Euclidean.
Output is deterministic: fixed drawing order and fixed number formatting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .geometry import (
    Alcove,
    Region,
    alcoves_in_box,
    base_alcove,
    region_contains_alcove,
    vertices,
)
from .rootsys import RootSystem

__all__ = ["FigureSpec", "ROLE_COLOURS", "embedding", "render_svg", "parse_polygons", "triangle_angles"]

ROLE_COLOURS = {
    "background": "#ffffff",
    "chamber": "#e6e6e6",
    "gallery": "#9ecae1",
    "class": "#e6550d",
    "base": "#fdd835",
}
ROLE_ORDER = ("base", "class", "gallery", "chamber")
SCALE = 60.0


@dataclass
class FigureSpec:
    radius: int
    base: bool = True
    lateral_class: set[Alcove] = field(default_factory=set)
    gallery: set[Alcove] = field(default_factory=set)
    chambers: list[Region] = field(default_factory=list)


def embedding(rs: RootSystem) -> tuple[tuple[float, float], tuple[float, float]]:
    """Images of the two simple coroots in the Euclidean plane."""
    if rs.rank != 2:
        raise ValueError("figures are only drawn in rank 2")
    g = rs.gram_matrix
    g11, g12, g22 = float(g[0][0]), float(g[0][1]), float(g[1][1])
    a = math.sqrt(g11)
    return (a, 0.0), (g12 / a, math.sqrt(g22 - g12 * g12 / g11))


def _to_plane(e, x: Sequence) -> tuple[float, float]:
    (ax, ay), (bx, by) = e
    x1, x2 = float(x[0]), float(x[1])
    return SCALE * (x1 * ax + x2 * bx), -SCALE * (x1 * ay + x2 * by)


def _fmt(v: float) -> str:
    s = f"{v:.12f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _role(spec: FigureSpec, a: Alcove) -> str:
    if spec.base and a == base_alcove(a.rs):
        return "base"
    if a in spec.lateral_class:
        return "class"
    if a in spec.gallery:
        return "gallery"
    if any(region_contains_alcove(r, a) for r in spec.chambers):
        return "chamber"
    return "background"


def render_svg(rs: RootSystem, spec: FigureSpec) -> str:
    """The alcoves with all coordinates in ``[-radius, radius - 1]``, plus highlights.

    Highlighted alcoves outside that box are drawn as well.
    """
    e = embedding(rs)
    alcoves = alcoves_in_box(rs, spec.radius)
    extra = sorted((spec.lateral_class | spec.gallery) - set(alcoves), key=lambda a: a.coords)
    shapes = []
    for a in list(alcoves) + extra:
        pts = [_to_plane(e, v) for v in vertices(a)]
        shapes.append((a, _role(spec, a), pts))
    xs = [p[0] for _, _, pts in shapes for p in pts]
    ys = [p[1] for _, _, pts in shapes for p in pts]
    pad = 10.0
    minx, miny = min(xs) - pad, min(ys) - pad
    width, height = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="{_fmt(minx)} {_fmt(miny)} {_fmt(width)} {_fmt(height)}">',
        f"<title>alcoves of {rs.cartan}</title>",
    ]
    # background first, then highlighted roles so they sit on top
    for role in ("background",) + tuple(reversed(ROLE_ORDER)):
        group = [(a, pts) for a, r, pts in shapes if r == role]
        if not group:
            continue
        out.append(f'<g id="{role}" fill="{ROLE_COLOURS[role]}" stroke="#444444" '
                   f'stroke-width="0.5">')
        for a, pts in group:
            points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
            coords = ",".join(map(str, a.coords))
            out.append(f'<polygon data-alcove="{coords}" points="{points}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_polygons(svg: str) -> list[tuple[str, list[tuple[float, float]]]]:
    """``(role, points)`` for every polygon of an SVG produced by :func:`render_svg`."""
    import xml.etree.ElementTree as ET

    ns = {"svg": "http://www.w3.org/2000/svg"}
    root = ET.fromstring(svg)
    out = []
    for g in root.findall("svg:g", ns):
        for poly in g.findall("svg:polygon", ns):
            pts = [tuple(float(c) for c in p.split(",")) for p in poly.get("points").split()]
            out.append((g.get("id"), pts))
    return out


def triangle_angles(pts: Iterable[tuple[float, float]]) -> list[float]:
    """Interior angles in degrees, sorted."""
    p = list(pts)
    angles = []
    for i in range(3):
        a, b, c = p[i], p[(i + 1) % 3], p[(i + 2) % 3]
        v1 = (b[0] - a[0], b[1] - a[1])
        v2 = (c[0] - a[0], c[1] - a[1])
        cos = (v1[0] * v2[0] + v1[1] * v2[1]) / (math.hypot(*v1) * math.hypot(*v2))
        angles.append(math.degrees(math.acos(max(-1.0, min(1.0, cos)))))
    return sorted(angles)
