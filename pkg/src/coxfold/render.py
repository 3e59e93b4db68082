"""SVG scatter plots of quasicrystal fragments.

H2 points are placed with a1 = (1, 0) and a2 at angle 4pi/5, evaluated with
30 significant digits. H3 and H4 points are drawn by orthographic projection
of their exact Cartesian coordinates onto two chosen axes.
"""
from __future__ import annotations

import decimal
from decimal import Decimal
from functools import lru_cache
from typing import Sequence
from xml.sax.saxutils import escape

from .coxeter import GroupId, RootVector, cartesian_embedding
from .golden import GoldenRat

__all__ = ["planar_h2", "golden_decimal", "render_svg", "SHELL_COLOURS"]

PRECISION = 30
SHELL_COLOURS = ("black", "red", "blue", "green", "orange", "purple", "brown")


def _ctx() -> decimal.Context:
    return decimal.Context(prec=PRECISION)


@lru_cache(maxsize=None)
def _constants() -> tuple[Decimal, Decimal, Decimal]:
    ctx = _ctx()
    root5 = ctx.sqrt(Decimal(5))
    tau = ctx.divide(ctx.add(Decimal(1), root5), Decimal(2))
    # a2 = (cos 4pi/5, sin 4pi/5) = (-tau/2, sqrt(1 - tau^2/4))
    cos = ctx.divide(-tau, Decimal(2))
    sin = ctx.sqrt(ctx.subtract(Decimal(1), ctx.multiply(cos, cos)))
    return tau, cos, sin


def golden_decimal(x: GoldenRat) -> Decimal:
    ctx = _ctx()
    tau = _constants()[0]
    num = ctx.add(Decimal(x.a), ctx.multiply(Decimal(x.b), tau))
    return ctx.divide(num, Decimal(x.den))


def planar_h2(coords: Sequence[GoldenRat]) -> tuple[Decimal, Decimal]:
    ctx = _ctx()
    _, cos, sin = _constants()
    c1, c2 = (golden_decimal(c) for c in coords)
    return ctx.add(c1, ctx.multiply(c2, cos)), ctx.multiply(c2, sin)


_PLANES = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2), "xw": (0, 3), "yw": (1, 3), "zw": (2, 3)}


def _project_points(group: GroupId, pts, plane: str):
    if group == GroupId.H2:
        return [planar_h2(p) for p in pts]
    i, j = _PLANES[plane]
    emb = cartesian_embedding(group)
    out = []
    for p in pts:
        c = emb.to_cartesian(RootVector(group, p))
        out.append((golden_decimal(c[i]), golden_decimal(c[j])))
    return out


def render_svg(
    group,
    shells: Sequence[Sequence[Sequence[GoldenRat]]],
    plane: str = "xy",
    size: int = 600,
    title: str = "",
    timestamp: str | None = None,
) -> str:
    """SVG 1.1 document: shell 0 (root polytope) black, then red, blue, green."""
    group = GroupId.parse(group)
    if plane not in _PLANES:
        raise ValueError(f"plane must be one of {sorted(_PLANES)}")
    if group == GroupId.H3 and 3 in _PLANES[plane]:
        raise ValueError(f"plane {plane!r} needs a fourth coordinate")
    placed = [_project_points(group, s, plane) for s in shells]
    allpts = [p for s in placed for p in s]
    extent = max((max(abs(x), abs(y)) for x, y in allpts), default=Decimal(1)) or Decimal(1)
    half = Decimal(size) / 2
    scale = (half - 20) / extent
    radius = max(1.5, size / 200)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if timestamp:
        lines.append(f"<!-- generated {escape(timestamp)} -->")
    if title:
        lines.append(f"<title>{escape(title)}</title>")
    lines.append(f'<rect width="{size}" height="{size}" fill="white"/>')
    # later shells first so the root polytope stays on top
    for m in reversed(range(len(placed))):
        colour = SHELL_COLOURS[m % len(SHELL_COLOURS)]
        lines.append(f'<g fill="{colour}" class="shell{m}">')
        for x, y in placed[m]:
            cx = half + x * scale
            cy = half - y * scale
            lines.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{radius:.2f}"/>')
        lines.append("</g>")
    legend = " ".join(f"P({m})={len(s)}" for m, s in enumerate(placed))
    lines.append(
        f'<text x="10" y="{size - 10}" font-family="sans-serif" font-size="12" fill="black">'
        f"{escape(legend)}; total {len(allpts)}</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
