"""Static SVG rendering of 2-dimensional unit balls.

Output is byte-stable for fixed inputs: coordinates are formatted with
a fixed precision and elements are emitted in a deterministic order.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spaces
from .errors import UnsupportedDimension, UnsupportedSpace

_SIZE = 480
_SCALE = 180.0
_CENTER = _SIZE / 2.0

_PALETTE = [
    "#7fc97f", "#beaed4", "#fdc086", "#ffff99",
    "#386cb0", "#f0027f", "#bf5b17", "#666666",
]


@dataclass
class RenderOptions:
    show_cones: bool = False
    show_labels: bool = True
    marked_points: list = field(default_factory=list)
    show_orth_directions: bool = False


def _fmt(v: float) -> str:
    out = f"{v:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _pix(pt):
    return _CENTER + _SCALE * pt[0], _CENTER - _SCALE * pt[1]


def _ordered_vertices(space):
    ang = np.arctan2(space.V[:, 1], space.V[:, 0])
    order = np.argsort(ang)
    return space.V[order], order


def render_ball_svg(space, options: RenderOptions | None = None) -> str:
    """SVG document of the unit polygon with optional cone sectors,
    vertex labels, marked points and their BJ-orthogonal directions."""
    if getattr(space, "kind", None) != "polyhedral":
        raise UnsupportedSpace("rendering needs a polyhedral space")
    if space.dim != 2:
        raise UnsupportedDimension("rendering is 2-dimensional only")
    opt = options or RenderOptions()
    V, order = _ordered_vertices(space)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" '
        f'height="{_SIZE}" viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        f'<line x1="0" y1="{_fmt(_CENTER)}" x2="{_SIZE}" y2="{_fmt(_CENTER)}" '
        'stroke="#cccccc" stroke-width="1"/>',
        f'<line x1="{_fmt(_CENTER)}" y1="0" x2="{_fmt(_CENTER)}" y2="{_SIZE}" '
        'stroke="#cccccc" stroke-width="1"/>',
    ]
    if opt.show_cones:
        for j in range(len(space.dual_vertices)):
            inc = space.incidence[j]
            a, b = space.V[inc[0]], space.V[inc[1]]
            far = 2.6
            ax, ay = _pix(far * a)
            bx, by = _pix(far * b)
            color = _PALETTE[j % len(_PALETTE)]
            lines.append(
                f'<path d="M {_fmt(_CENTER)} {_fmt(_CENTER)} L {_fmt(ax)} '
                f'{_fmt(ay)} L {_fmt(bx)} {_fmt(by)} Z" fill="{color}" '
                'fill-opacity="0.25" stroke="none"/>'
            )
    path = []
    for i, v in enumerate(V):
        x, y = _pix(v)
        path.append(f'{"M" if i == 0 else "L"} {_fmt(x)} {_fmt(y)}')
    path.append("Z")
    lines.append(
        f'<path d="{" ".join(path)}" fill="none" stroke="black" stroke-width="2"/>'
    )
    for i, v in enumerate(V):
        x, y = _pix(v)
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" fill="black"/>'
        )
        if opt.show_labels:
            lx, ly = _pix(v * 1.13)
            lines.append(
                f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="13" '
                f'text-anchor="middle" font-family="monospace">v{i + 1}</text>'
            )
    for pt in opt.marked_points:
        pt = np.asarray(pt, dtype=float)
        x, y = _pix(pt)
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="#d62728"/>'
        )
        if opt.show_orth_directions:
            for f in spaces.support_set(space, pt).extremes:
                d = np.array([-f.coeffs[1], f.coeffs[0]], dtype=float)
                d = d / spaces.norm(space, d)
                for sgn in (1.0, -1.0):
                    ex, ey = _pix(sgn * 1.9 * d)
                    lines.append(
                        f'<line x1="{_fmt(_CENTER)}" y1="{_fmt(_CENTER)}" '
                        f'x2="{_fmt(ex)}" y2="{_fmt(ey)}" stroke="#d62728" '
                        'stroke-width="1.2" stroke-dasharray="6 4"/>'
                    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
