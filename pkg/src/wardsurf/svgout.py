"""Deterministic SVG rendering of surfaces, cylinder shadings, and marks.

Output is a pure function of its inputs: fixed palette, stable iteration
order, fixed float formatting, no timestamps.
"""

from __future__ import annotations

from wardsurf.flows import CylinderDecomposition
from wardsurf.surface import Surface, SurfacePoint

_PALETTE = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
]


def _fmt(x: float) -> str:
    return f"{x:.6f}"


class _Canvas:
    def __init__(self, points, size=760.0, margin=30.0):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        self.x0, self.x1 = min(xs), max(xs)
        self.y0, self.y1 = min(ys), max(ys)
        span = max(self.x1 - self.x0, self.y1 - self.y0, 1e-9)
        self.scale = (size - 2 * margin) / span
        self.margin = margin
        self.width = (self.x1 - self.x0) * self.scale + 2 * margin
        self.height = (self.y1 - self.y0) * self.scale + 2 * margin

    def map(self, x: float, y: float) -> tuple[float, float]:
        # flip y: SVG grows downward
        return (
            self.margin + (x - self.x0) * self.scale,
            self.margin + (self.y1 - y) * self.scale,
        )

    def path(self, pts) -> str:
        mapped = [self.map(x, y) for x, y in pts]
        body = " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in mapped)
        return f"M {body} Z"


def _poly_points(surface: Surface):
    out = []
    for p in surface.polygons:
        out.extend((vx.approx(), vy.approx()) for vx, vy in p.vertices)
    return out


def render_surface(
    surface: Surface,
    decomposition: CylinderDecomposition | None = None,
    marks: list[tuple[SurfacePoint, str]] | None = None,
    title: str = "",
) -> str:
    """SVG drawing: polygon outlines, optional cylinder strips, marks.

    ``marks`` pairs points with a label class ('singularity', 'center',
    'point'); they render as colored dots with class-specific styling.
    """
    canvas = _Canvas(_poly_points(surface))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(canvas.width)}" height="{_fmt(canvas.height)}" '
        f'viewBox="0 0 {_fmt(canvas.width)} {_fmt(canvas.height)}">'
    ]
    if title:
        parts.append(f"<title>{title}</title>")

    if decomposition is not None:
        for cyl in decomposition.cylinders:
            color = _PALETTE[cyl.index % len(_PALETTE)]
            for slab in cyl.slabs:
                corners = [
                    (slab.x_left(slab.y0), slab.y0),
                    (slab.x_right(slab.y0), slab.y0),
                    (slab.x_right(slab.y1), slab.y1),
                    (slab.x_left(slab.y1), slab.y1),
                ]
                world = [decomposition.from_frame(X, Y) for X, Y in corners]
                pts = [(x.approx(), y.approx()) for x, y in world]
                parts.append(
                    f'<path d="{canvas.path(pts)}" fill="{color}" '
                    f'fill-opacity="0.75" stroke="none"/>'
                )
        # label each cylinder at the midpoint of its widest slab
        for cyl in decomposition.cylinders:
            widest = max(
                cyl.slabs,
                key=lambda s: (s.x_right(s.y0) - s.x_left(s.y0)).approx(),
            )
            y = (widest.y0.approx() + widest.y1.approx()) / 2
            x = (
                widest.x_left(widest.y0).approx()
                + widest.x_right(widest.y0).approx()
            ) / 2
            wx = decomposition._c.approx() * x - decomposition._s.approx() * y
            wy = decomposition._s.approx() * x + decomposition._c.approx() * y
            cx, cy = canvas.map(wx, wy)
            parts.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" font-size="14" '
                f'text-anchor="middle" fill="#333333">C{cyl.index}</text>'
            )

    for p in surface.polygons:
        pts = [(vx.approx(), vy.approx()) for vx, vy in p.vertices]
        parts.append(
            f'<path d="{canvas.path(pts)}" fill="none" '
            f'stroke="#000000" stroke-width="1.5"/>'
        )

    if marks:
        style = {
            "singularity": ("#d62728", 6.0),
            "center": ("#1f77b4", 5.0),
            "point": ("#2ca02c", 4.0),
        }
        for point, kind in marks:
            color, r = style.get(kind, style["point"])
            cx, cy = canvas.map(point.x.approx(), point.y.approx())
            parts.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
                f'fill="{color}" stroke="#ffffff" stroke-width="1"/>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
