"""Deterministic SVG circle diagrams of a phase configuration.

Node ``i`` sits on a circle of radius 250 centred in a 600x600 viewport at
angle ``theta_i`` measured clockwise from due east. Screen y grows downward,
so that is simply ``(cx + r cos theta, cy + r sin theta)``. Every edge is a
chord. Output depends only on the inputs: elements are emitted in node and
edge order with coordinates fixed to three decimals.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import ShapeError
from .network import Network

SIZE = 600
RADIUS = 250.0
NODE_RADIUS = 6
LABEL_RADIUS = RADIUS + 22.0


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def circle_diagram_svg(net: Network, theta, highlight=()) -> str:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (net.n,):
        raise ShapeError(f"expected {net.n} phases, got shape {theta.shape}")
    c = SIZE / 2.0
    xs = [c + RADIUS * math.cos(t) for t in theta]
    ys = [c + RADIUS * math.sin(t) for t in theta]
    marked = set(int(i) for i in highlight)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f'<circle cx="{_fmt(c)}" cy="{_fmt(c)}" r="{_fmt(RADIUS)}" fill="none" '
        'stroke="#888888" stroke-width="1"/>',
        f'<line x1="{_fmt(c)}" y1="{_fmt(c)}" x2="{_fmt(c + RADIUS)}" y2="{_fmt(c)}" '
        'stroke="#bbbbbb" stroke-width="1" stroke-dasharray="4 4"/>',
        '<g id="edges" stroke="#1f4e79" stroke-width="2">',
    ]
    for i, j in net.edges:
        out.append(
            f'<line x1="{_fmt(xs[i])}" y1="{_fmt(ys[i])}" x2="{_fmt(xs[j])}" y2="{_fmt(ys[j])}"/>'
        )
    out.append("</g>")
    out.append('<g id="nodes">')
    for i in range(net.n):
        fill = "#c0392b" if i in marked else "#000000"
        out.append(f'<circle cx="{_fmt(xs[i])}" cy="{_fmt(ys[i])}" r="{NODE_RADIUS}" fill="{fill}"/>')
    out.append("</g>")
    out.append('<g id="labels" font-family="sans-serif" font-size="14" text-anchor="middle">')
    for i, t in enumerate(theta):
        lx = c + LABEL_RADIUS * math.cos(t)
        ly = c + LABEL_RADIUS * math.sin(t) + 5.0
        out.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}">{i}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_circle_diagram(net: Network, theta, out, highlight=()) -> str:
    """Write the diagram to ``out`` and return the SVG text."""
    svg = circle_diagram_svg(net, theta, highlight)
    Path(out).write_bytes(svg.encode("utf-8"))
    return svg
