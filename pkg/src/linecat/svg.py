"""Deterministic SVG rendering of configurations, polygons and flow trees.

Output is plain text with fixed-precision coordinates, so golden-file tests
can diff it byte-for-byte.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .geometry import CCPolygon, LineConfig, classify_sequence
from .scalars import rat_str

_W, _H = 480, 360
_MARGIN = Fraction(3, 2)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _View:
    def __init__(self, xs, ys):
        xmin, xmax = min(xs) - _MARGIN, max(xs) + _MARGIN
        ymin, ymax = min(ys) - _MARGIN, max(ys) + _MARGIN
        self.xmin, self.xmax, self.ymin, self.ymax = xmin, xmax, ymin, ymax
        self.sx = Fraction(_W) / (xmax - xmin)
        self.sy = Fraction(_H) / (ymax - ymin)

    def px(self, x: Fraction) -> float:
        return float((x - self.xmin) * self.sx)

    def py(self, y: Fraction) -> float:
        # svg y axis points down
        return float((self.ymax - y) * self.sy)


def emit_svg(cfg: LineConfig, polygon_ids: Optional[Sequence[str]] = None,
             with_tree: bool = False, strict: bool = False) -> str:
    """Figure with all lines, labeled intersection points, optional polygon.

    ``polygon_ids`` selects the cyclic line sequence (a_1 ... a_k) whose
    consecutive intersection points are classified; a shaded polygon and its
    area annotation are drawn when they form a clockwise convex cycle, a
    diagnostic note otherwise (an error under strict mode).
    """
    pts = cfg.all_points()
    xs = [p.x for p in pts.values()] or [Fraction(0)]
    ys = [p.y for p in pts.values()] or [Fraction(0)]
    view = _View(xs, ys)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>']

    shape = None
    cycle = None
    if polygon_ids:
        ids = list(polygon_ids)
        pairs = list(zip(ids, ids[1:] + ids[:1]))
        cycle = [cfg.intersect(a, b) for a, b in pairs]
        shape = classify_sequence(cycle)
        if isinstance(shape, CCPolygon):
            path = " ".join(
                f"{'M' if i == 0 else 'L'} {_fmt(view.px(p.x))} {_fmt(view.py(p.y))}"
                for i, p in enumerate(shape.vertices))
            out.append(f'<path d="{path} Z" fill="#cfe2ff" stroke="none"/>')
        else:
            note = f"not a clockwise convex cycle: {type(shape).__name__}"
            if strict:
                raise ValueError(note)
            out.append(f'<text x="8" y="16" font-size="12" fill="#b00">'
                       f"{note}</text>")

    for ln in cfg.lines:
        x0, x1 = view.xmin, view.xmax
        p0 = (view.px(x0), view.py(ln.y_at(x0)))
        p1 = (view.px(x1), view.py(ln.y_at(x1)))
        out.append(f'<line x1="{_fmt(p0[0])}" y1="{_fmt(p0[1])}" '
                   f'x2="{_fmt(p1[0])}" y2="{_fmt(p1[1])}" '
                   f'stroke="#444" stroke-width="1"/>')
        xlab = view.xmax - _MARGIN / 2
        out.append(f'<text x="{_fmt(view.px(xlab))}" '
                   f'y="{_fmt(view.py(ln.y_at(xlab)) - 4)}" font-size="11" '
                   f'fill="#444">{ln.id}</text>')

    for key in sorted(pts, key=lambda k: tuple(sorted(k))):
        a, b = sorted(key)
        p = pts[key]
        deg = cfg.morphism_degree(a, b)
        out.append(f'<circle cx="{_fmt(view.px(p.x))}" cy="{_fmt(view.py(p.y))}" '
                   f'r="3" fill="#d33"/>')
        out.append(f'<text x="{_fmt(view.px(p.x) + 5)}" '
                   f'y="{_fmt(view.py(p.y) - 5)}" font-size="11" fill="#000">'
                   f"v[{a}{b}]|{deg}|</text>")

    if isinstance(shape, CCPolygon):
        cx = sum(p.x for p in shape.vertices) / len(shape.vertices)
        cy = sum(p.y for p in shape.vertices) / len(shape.vertices)
        out.append(f'<text x="{_fmt(view.px(cx))}" y="{_fmt(view.py(cy))}" '
                   f'font-size="12" fill="#036">area={rat_str(shape.area)}</text>')
        if with_tree:
            out.extend(_tree_overlay(cfg, shape, view))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tree_overlay(cfg: LineConfig, shape: CCPolygon, view: _View) -> list:
    """Gradient-flow tree: the interval joining the two extremal vertices,
    with a vertical drop from every other vertex onto it."""
    verts = list(shape.vertices)
    vl = min(verts, key=lambda p: p.x)
    vr = max(verts, key=lambda p: p.x)
    if vl.x == vr.x:
        return []
    out = [f'<line x1="{_fmt(view.px(vl.x))}" y1="{_fmt(view.py(vl.y))}" '
           f'x2="{_fmt(view.px(vr.x))}" y2="{_fmt(view.py(vr.y))}" '
           f'stroke="#071" stroke-width="1.5" stroke-dasharray="5,3"/>']
    slope = (vr.y - vl.y) / (vr.x - vl.x)
    for p in verts:
        if p in (vl, vr):
            continue
        y_on = vl.y + slope * (p.x - vl.x)
        out.append(f'<line x1="{_fmt(view.px(p.x))}" y1="{_fmt(view.py(p.y))}" '
                   f'x2="{_fmt(view.px(p.x))}" y2="{_fmt(view.py(y_on))}" '
                   f'stroke="#071" stroke-width="1.5" stroke-dasharray="2,2"/>')
    return out
