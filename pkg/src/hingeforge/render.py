"""Deterministic SVG drawings of nets, placed pieces and the separating cycle."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

from .dissect import HingedDissection, Net


@dataclass(frozen=True)
class RenderOptions:
    size: float = 480.0
    margin: float = 16.0
    overlay_cycle: bool = False
    stroke: float = 1.5


def piece_color(i):
    """Fixed color per piece index (golden-angle hue walk)."""
    hue = (i * 137.508) % 360.0
    return f"hsl({hue:.1f},65%,72%)"


class _Frame:
    def __init__(self, points, opts):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-12)
        self.k = (opts.size - 2 * opts.margin) / span
        self.m = opts.margin
        self.w = (max(xs) - self.x0) * self.k + 2 * opts.margin
        self.h = (self.y1 - min(ys)) * self.k + 2 * opts.margin

    def xy(self, p):
        x = (p[0] - self.x0) * self.k + self.m
        y = (self.y1 - p[1]) * self.k + self.m
        return f"{x + 0.0:.3f},{y + 0.0:.3f}"

    def path(self, pts, closed):
        d = "M" + " L".join(self.xy(p) for p in pts)
        return d + (" Z" if closed else "")


def render_svg(net: Net, D: HingedDissection = None, config="A", cycle=None,
               opts: RenderOptions = RenderOptions(), title=None) -> str:
    """One net with its placed pieces, the other tree's image and the hinge chain.

    ``cycle`` is a SeparatingCycle; it is drawn only when ``opts.overlay_cycle``.
    """
    pts = list(net.boundary)
    pieces = [D.placed(i, config) for i in range(D.n)] if D is not None else []
    for poly in pieces:
        pts += poly
    fr = _Frame(pts, opts)
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" width="{fr.w:.1f}" height="{fr.h:.1f}" '
           f'viewBox="0 0 {fr.w:.1f} {fr.h:.1f}">']
    if title:
        out.append(f"<title>{title}</title>")
    out.append('<g id="pieces" stroke="none">')
    for i, poly in enumerate(pieces):
        out.append(f'<path id="piece-{i}" d="{fr.path(poly, True)}" fill={quoteattr(piece_color(i))}/>')
    out.append("</g>")
    out.append(f'<path id="net-outline" d="{fr.path(net.boundary, True)}" fill="none" '
               f'stroke="black" stroke-width="{opts.stroke}"/>')
    out.append(f'<g id="tree-image" stroke="#1f4e9c" stroke-width="{opts.stroke}" fill="none">')
    for a, b in net.tree_image:
        out.append(f'<path d="{fr.path([a, b], False)}"/>')
    out.append("</g>")
    if D is not None:
        chain = [D.hinge_point(j, config) for j in range(len(D.hinges))]
        out.append(f'<path id="hinge-chain" d="{fr.path(chain, True)}" fill="none" stroke="#b22222" '
                   f'stroke-width="{opts.stroke / 2}" stroke-dasharray="4 3"/>')
        out.append('<g id="hinges" fill="#b22222">')
        for j, p in enumerate(chain):
            x, y = fr.xy(p).split(",")
            out.append(f'<circle cx="{x}" cy="{y}" r="3"/>')
        out.append("</g>")
    if opts.overlay_cycle and cycle is not None:
        curve = [net.place[c].apply(xy) for c, xy in cycle.curve_cells if c in net.place]
        out.append(f'<path id="separating-cycle" d="{fr.path(curve, True)}" fill="none" '
                   f'stroke="#2e8b57" stroke-width="{opts.stroke}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
