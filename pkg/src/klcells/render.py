"""SVG pictures of cell partitions of the planar affine groups.

Element w is drawn as the alcove of w^-1 (``CoxeterGroup.picture_polygon``)
so that left cells are connected regions.  Fill colour follows the rank of
the two-sided block by a-value; walls between different left cells are
drawn thick.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .cells import CellPartition
from .coxeter import CoxeterGroup

__all__ = ["PALETTE", "render_svg"]

PALETTE = (
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
    "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1",
    "#000075", "#808080",
)


def _colour_keys(two_sided: CellPartition) -> list[int]:
    """Palette slot per two-sided block: rank by (a-value, smallest element)."""
    g = two_sided.group
    a = two_sided.a_values or [0] * len(two_sided.blocks)
    order = sorted(
        range(len(two_sided.blocks)),
        key=lambda k: (a[k], min(g.length_of(w) for w in two_sided.blocks[k]), min(two_sided.blocks[k])),
    )
    slot = [0] * len(order)
    for rank, k in enumerate(order):
        slot[k] = rank
    return slot


def _edge_key(p, q):
    r = lambda t: (round(t[0], 6), round(t[1], 6))
    a, b = r(p), r(q)
    return (a, b) if a <= b else (b, a)


def render_svg(
    left: CellPartition,
    two_sided: CellPartition,
    *,
    scale: float = 60.0,
    labels: bool = False,
) -> str:
    """One polygon per element of the trusted ball of ``left``."""
    g: CoxeterGroup = left.group
    n = g.ball_size(left.trusted)
    polys = {w: g.picture_polygon(w) for w in range(n)}
    xs = [x for p in polys.values() for x, _ in p]
    ys = [y for p in polys.values() for _, y in p]
    pad = 0.2
    x0, x1, y0, y1 = min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def pt(p):
        return f"{(p[0] - x0) * scale:.2f},{(y1 - p[1]) * scale:.2f}"

    slot = _colour_keys(two_sided)
    lblock = {w: left.block_of(w) for w in range(n)}
    tblock = {w: two_sided.block_of(w) for w in range(n)}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
        f"<title>{escape(g.preset.name)} cells, radius {left.trusted}</title>",
        '<g id="alcoves" stroke="#555" stroke-width="0.5">',
    ]
    edges: dict[tuple, list[int]] = {}
    for w in range(n):
        poly = polys[w]
        colour = PALETTE[slot[tblock[w]] % len(PALETTE)]
        out.append(
            f'<polygon points="{" ".join(pt(p) for p in poly)}" fill="{colour}">'
            f"<title>{escape(g.name(w))}</title></polygon>"
        )
        for i in range(3):
            edges.setdefault(_edge_key(poly[i], poly[(i + 1) % 3]), []).append(w)
    out.append("</g>")
    out.append('<g id="left-walls" stroke="#000" stroke-width="3" stroke-linecap="round">')
    for (p, q), ws in sorted(edges.items()):
        if len(ws) == 2 and lblock[ws[0]] != lblock[ws[1]]:
            out.append(f'<line x1="{pt(p).split(",")[0]}" y1="{pt(p).split(",")[1]}" '
                       f'x2="{pt(q).split(",")[0]}" y2="{pt(q).split(",")[1]}"/>')
    out.append("</g>")
    if labels:
        out.append('<g id="labels" font-size="9" text-anchor="middle">')
        for k, b in enumerate(left.blocks):
            if not b or not left.labels:
                continue
            w = min(b, key=lambda z: (g.length_of(z), z))
            cx = sum(p[0] for p in polys[w]) / 3
            cy = sum(p[1] for p in polys[w]) / 3
            x, y = pt((cx, cy)).split(",")
            out.append(f'<text x="{x}" y="{y}">{escape(left.labels[k])}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
