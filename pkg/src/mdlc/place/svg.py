"""SVG drawing of a placed network."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from mdlc.place.pipeline import Layout
from mdlc.techmap.network import CouplingKind, MassSpringNetwork

SCALE = 12.0
MARGIN = 2.0


def _bias_color(bias: float) -> str:
    if bias > 0:
        return "#3b6fd6"
    if bias < 0:
        return "#d68a1c"
    return "#9a9a9a"


def render_svg(network: MassSpringNetwork, layout: Layout, vertices=None) -> str:
    pts = list(layout.positions.values()) + list(vertices or [])
    xs = [p[0] for p in pts] or [0]
    ys = [p[1] for p in pts] or [0]
    x0, x1 = min(xs) - MARGIN, max(xs) + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + MARGIN
    width, height = (x1 - x0) * SCALE, (y1 - y0) * SCALE

    def tx(p):
        return (p[0] - x0) * SCALE, (y1 - p[1]) * SCALE

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if vertices:
        poly = " ".join(f"{a:.1f},{b:.1f}" for a, b in map(tx, vertices))
        out.append(f'<polygon points="{poly}" fill="none" stroke="black" stroke-width="2"/>')
    for c in network.couplings:
        (ax, ay), (bx, by) = tx(layout.positions[c.i]), tx(layout.positions[c.j])
        dash = ' stroke-dasharray="4,3"' if c.kind is CouplingKind.NONLINEAR_GATE else ""
        out.append(f'<line x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" y2="{by:.1f}" stroke="#444" stroke-width="1.2"{dash}/>')
        if c.kind is CouplingKind.LINEAR_NEG:
            mx, my = (ax + bx) / 2, (ay + by) / 2
            length = math.hypot(bx - ax, by - ay) or 1.0
            nx, ny = -(by - ay) / length * 4, (bx - ax) / length * 4
            out.append(
                f'<line x1="{mx - nx:.1f}" y1="{my - ny:.1f}" x2="{mx + nx:.1f}" y2="{my + ny:.1f}" '
                'stroke="red" stroke-width="3"/>'
            )
    for m in network.masses:
        x, y = tx(layout.positions[m.id])
        stroke = ' stroke="black" stroke-width="2"' if m.id in layout.pinned else ""
        title = escape(f"{m.id} {m.label or m.tag}")
        out.append(
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{SCALE * 0.35:.1f}" fill="{_bias_color(m.bias)}"{stroke}>'
            f"<title>{title}</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
