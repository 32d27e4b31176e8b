"""Deterministic SVG rendering of diagrams.

Drawing conventions: time runs down the left edge with a "0" tick for now,
data circles get dotted borders, sensor bars hatch at -45 degrees and 2D
markers at +45, relationship markers are dotted lines with centered
arrowheads, verbatim boxes draw a double border and descriptive boxes one
border less.  Output is byte-identical for identical input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import Violation, validate
from .model import Diagram, Edge, EdgeKind, Element, Kind
from .values import fmt_num
from .dsl import value_literal

__all__ = ["RenderOptions", "InvalidDiagram", "render"]


class InvalidDiagram(Exception):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__(f"{len(violations)} violation(s); render refused")


@dataclass(frozen=True)
class RenderOptions:
    color: bool = False
    width: int = 960
    height: int = 640
    font_size: int = 12
    hatch_spacing: int = 6

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if self.font_size <= 0 or self.hatch_spacing <= 0:
            raise ValueError("font size and hatch spacing must be positive")


_CIRCLE_KINDS = {
    Kind.PHYSICAL_OBJECT_CIRCLE,
    Kind.DATA_OBJECT_CIRCLE,
    Kind.CA_OBJECT_CIRCLE,
    Kind.DATA_POINT,
    Kind.STATE_CIRCLE,
    Kind.CELL,
}

_BOX_KINDS = {
    Kind.VERBATIM_BOX,
    Kind.DESCRIPTIVE_BOX,
    Kind.AGGREGATION_BOX,
    Kind.CA_AGGREGATION_BOX,
    Kind.XOR_BOX,
    Kind.DATA_SET_BOX,
    Kind.ZOOM_BOX_PAIR,
    Kind.CORRELATION_BOX,
}

# Grammatical-role hues, used only when options.color is on.
_ROLE_COLORS = {"subject": "#d8ecff", "direct": "#ffe0cc", "indirect": "#e4ffd8"}


def _esc(s: str) -> str:
    return (
        s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


@dataclass
class _Box:
    x: float
    y: float
    w: float
    h: float

    @property
    def cx(self) -> float:
        return self.x + self.w / 2

    @property
    def cy(self) -> float:
        return self.y + self.h / 2


def _leaf_size(el: Element, font: int) -> tuple[float, float]:
    kind = el.kind
    label = el.label or ""
    text_w = max(36.0, len(label) * font * 0.62 + 12)
    if kind in _CIRCLE_KINDS:
        side = max(52.0, text_w)
        return side, side
    if kind in (Kind.SENSOR_BAR, Kind.VALUE_BAR):
        return max(84.0, text_w), 18.0
    if kind is Kind.MARKER_0D:
        return 12.0, 12.0
    if kind is Kind.MARKER_1D:
        return 72.0, 6.0
    if kind is Kind.MARKER_2D:
        return 72.0, 48.0
    if kind is Kind.LABEL_STRING:
        return text_w, font + 8.0
    if kind is Kind.ATTEND_RING:
        return 22.0, 22.0
    if kind is Kind.TIME_ANCHOR:
        return 26.0, font + 6.0
    if kind is Kind.MOTIVATION_TRIANGLE:
        return 84.0, 72.0
    if kind is Kind.ROBINSON_ICON:
        return 84.0, 84.0
    if kind in (Kind.MODAL_VERB_ICON, Kind.SWIRLY_ARRAY):
        cells = getattr(el.payload, "cells", ())
        if cells:
            w = max(x for _, x, _ in cells) + 24
            h = max(y for _, _, y in cells) + 24
            return max(w, 48.0), max(h, 24.0)
        return 96.0, 48.0
    return max(72.0, text_w), 48.0


def _layout(d: Diagram, options: RenderOptions) -> dict[str, _Box]:
    """Assign a box to every element: explicit positions win, containers
    pack their children, top-level elements are layered left-to-right by
    arrow topology."""
    children: dict[str, list[str]] = {}
    for child in sorted(d.containment):
        children.setdefault(d.containment[child], []).append(child)

    sizes: dict[str, tuple[float, float]] = {}

    def measure(eid: str) -> tuple[float, float]:
        if eid in sizes:
            return sizes[eid]
        el = d.elements[eid]
        kids = children.get(eid, [])
        pad = 16.0
        if not kids:
            size = _leaf_size(el, options.font_size)
        elif all(d.elements[k].position is not None for k in kids):
            right = 0.0
            bottom = 0.0
            for k in kids:
                kw, kh = measure(k)
                pos = d.elements[k].position
                right = max(right, pos.x + (pos.w or kw))
                bottom = max(bottom, pos.y + (pos.h or kh))
            size = (right + pad, bottom + pad + options.font_size)
        else:
            x = pad
            tallest = 0.0
            for k in kids:
                kw, kh = measure(k)
                x += kw + pad
                tallest = max(tallest, kh)
            size = (max(x, 72.0), tallest + 2 * pad + options.font_size)
        # Leave room under the element for its attribute lines.
        n_attrs = len(d.bindings_of(eid))
        if el.label:
            n_attrs += 0  # label is drawn inside the shape
        size = (size[0], size[1] + n_attrs * (options.font_size + 3))
        sizes[eid] = size
        return size

    for eid in sorted(d.elements):
        measure(eid)

    roots = sorted(e for e in d.elements if e not in d.containment)

    # Layer roots by non-tube arrow topology, sources leftmost.
    layer: dict[str, int] = {r: 0 for r in roots}
    for _ in range(len(roots)):
        changed = False
        for eid in sorted(d.edges):
            edge = d.edges[eid]
            if edge.kind is EdgeKind.TIME:
                continue
            src, dst = edge.source, edge.target
            if src in layer and dst in layer and src != dst:
                if layer[dst] < layer[src] + 1:
                    layer[dst] = layer[src] + 1
                    changed = True
        if not changed:
            break

    boxes: dict[str, _Box] = {}
    left_margin = 90.0
    top_margin = 40.0
    col_x = left_margin
    for level in sorted(set(layer.values())):
        col_roots = [r for r in roots if layer[r] == level]
        widest = 0.0
        y = top_margin
        for r in col_roots:
            w, h = sizes[r]
            if d.elements[r].position is not None:
                pos = d.elements[r].position
                boxes[r] = _Box(left_margin + pos.x, top_margin + pos.y, pos.w or w, pos.h or h)
            else:
                boxes[r] = _Box(col_x, y, w, h)
                y += h + 28.0
            widest = max(widest, boxes[r].w)
        col_x += widest + 64.0

    def place_children(parent: str) -> None:
        pbox = boxes[parent]
        kids = children.get(parent, [])
        pad = 16.0
        x = pbox.x + pad
        for k in kids:
            kw, kh = sizes[k]
            pos = d.elements[k].position
            if pos is not None:
                boxes[k] = _Box(pbox.x + pos.x, pbox.y + pos.y, pos.w or kw, pos.h or kh)
            else:
                boxes[k] = _Box(x, pbox.y + pad + options.font_size, kw, kh)
                x += kw + pad
            place_children(k)

    for r in roots:
        place_children(r)
    return boxes


def render(d: Diagram, options: RenderOptions | None = None) -> str:
    """Render a valid diagram to an SVG document string."""
    options = options or RenderOptions()
    violations = validate(d)
    if violations:
        raise InvalidDiagram(violations)

    boxes = _layout(d, options)
    font = options.font_size
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{options.width}" '
        f'height="{options.height}" font-size="{font}" font-family="sans-serif">'
    )
    spacing = options.hatch_spacing
    out.append("<defs>")
    out.append(
        f'<pattern id="hatch-neg45" width="{spacing}" height="{spacing}" '
        'patternUnits="userSpaceOnUse" patternTransform="rotate(-45)">'
        f'<line x1="0" y1="0" x2="0" y2="{spacing}" stroke="black" stroke-width="1"/>'
        "</pattern>"
    )
    out.append(
        f'<pattern id="hatch-pos45" width="{spacing}" height="{spacing}" '
        'patternUnits="userSpaceOnUse" patternTransform="rotate(45)">'
        f'<line x1="0" y1="0" x2="0" y2="{spacing}" stroke="black" stroke-width="1"/>'
        "</pattern>"
    )
    out.append(
        '<marker id="arrowhead" markerWidth="10" markerHeight="8" refX="9" refY="4" '
        'orient="auto"><path d="M0,0 L10,4 L0,8 z" fill="black"/></marker>'
    )
    out.append("</defs>")

    # Time arrows run down the left-hand side, each with its "0" tick.
    time_edges = d.edges_of_kind(EdgeKind.TIME)
    for i, eid in enumerate(time_edges):
        x = 28 + i * 34
        top, bottom = 30, options.height - 40
        zero_y = (top + bottom) // 2
        out.append(f'<g id="{_esc(eid)}" class="edge time-arrow">')
        out.append(
            f'<line x1="{x}" y1="{top}" x2="{x}" y2="{bottom}" stroke="black" '
            'stroke-width="1.5" marker-end="url(#arrowhead)"/>'
        )
        out.append(
            f'<line x1="{x - 6}" y1="{zero_y}" x2="{x + 6}" y2="{zero_y}" '
            'stroke="black" stroke-width="1.5"/>'
        )
        out.append(f'<text x="{x + 9}" y="{zero_y + 4}">0</text>')
        out.append(f'<text x="{x - 6}" y="{top - 8}">t</text>')
        out.append("</g>")

    drawn_parents_first = sorted(
        d.elements, key=lambda e: (_depth(d, e), e)
    )
    for eid in drawn_parents_first:
        out.extend(_render_element(d, eid, boxes[eid], options))

    for eid in sorted(d.edges):
        edge = d.edges[eid]
        if edge.kind is EdgeKind.TIME:
            continue
        out.extend(_render_edge(d, eid, edge, boxes, options))

    # State-group token markers.
    for gid in sorted(d.groups):
        group = d.groups[gid]
        marker = getattr(group, "marker", None)
        if marker and marker in boxes:
            b = boxes[marker]
            out.append(
                f'<circle class="token-marker" cx="{fmt_num(b.cx)}" cy="{fmt_num(b.cy)}" '
                'r="5" fill="red"/>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _depth(d: Diagram, eid: str) -> int:
    depth = 0
    node = d.containment.get(eid)
    while node is not None:
        depth += 1
        node = d.containment.get(node)
    return depth


def _render_element(d: Diagram, eid: str, box: _Box, options: RenderOptions) -> list[str]:
    el = d.elements[eid]
    kind = el.kind
    font = options.font_size
    out = [f'<g id="{_esc(eid)}" class="elem kind-{kind.value}">']
    fill = "none"
    if options.color and kind in _CIRCLE_KINDS:
        role = None
        if isinstance(el.payload, object):
            role = getattr(el.payload, "props", {}).get("role")
        fill = _ROLE_COLORS.get(role, "none")

    x, y, w, h = box.x, box.y, box.w, box.h
    if kind in _CIRCLE_KINDS:
        dashed = ' stroke-dasharray="3,3"' if kind in (Kind.DATA_OBJECT_CIRCLE, Kind.DATA_POINT) else ""
        out.append(
            f'<ellipse cx="{fmt_num(box.cx)}" cy="{fmt_num(box.cy)}" rx="{fmt_num(w / 2)}" '
            f'ry="{fmt_num(h / 2)}" fill="{fill}" stroke="black"{dashed}/>'
        )
        if kind is Kind.STATE_CIRCLE:
            out.append(
                f'<line x1="{fmt_num(x + w * 0.2)}" y1="{fmt_num(y + h * 0.85)}" '
                f'x2="{fmt_num(x + w * 0.8)}" y2="{fmt_num(y + h * 0.15)}" stroke="black"/>'
            )
    elif kind is Kind.SENSOR_BAR:
        out.append(
            f'<rect x="{fmt_num(x)}" y="{fmt_num(y)}" width="{fmt_num(w)}" height="{fmt_num(h)}" '
            'fill="url(#hatch-neg45)" stroke="black"/>'
        )
    elif kind is Kind.MARKER_2D:
        out.append(
            f'<rect x="{fmt_num(x)}" y="{fmt_num(y)}" width="{fmt_num(w)}" height="{fmt_num(h)}" '
            'fill="url(#hatch-pos45)" stroke="none"/>'
        )
    elif kind is Kind.MARKER_0D:
        out.append(
            f'<circle cx="{fmt_num(box.cx)}" cy="{fmt_num(box.cy)}" r="6" fill="red"/>'
        )
    elif kind is Kind.MARKER_1D:
        out.append(
            f'<line x1="{fmt_num(x)}" y1="{fmt_num(box.cy)}" x2="{fmt_num(x + w)}" '
            f'y2="{fmt_num(box.cy)}" stroke="black" stroke-dasharray="5,4"/>'
        )
    elif kind is Kind.VALUE_BAR:
        out.append(
            f'<rect x="{fmt_num(x)}" y="{fmt_num(y)}" width="{fmt_num(w)}" height="{fmt_num(h)}" '
            'fill="none" stroke="black"/>'
        )
        out.append(
            f'<line x1="{fmt_num(x)}" y1="{fmt_num(y - 3)}" x2="{fmt_num(x)}" '
            f'y2="{fmt_num(y + h + 3)}" stroke="black"/>'
        )
        out.append(
            f'<line x1="{fmt_num(x + w)}" y1="{fmt_num(y - 3)}" x2="{fmt_num(x + w)}" '
            f'y2="{fmt_num(y + h + 3)}" stroke="black"/>'
        )
    elif kind is Kind.ATTEND_RING:
        out.append(
            f'<circle cx="{fmt_num(box.cx)}" cy="{fmt_num(box.cy)}" r="{fmt_num(w / 2)}" '
            'fill="none" stroke="black" stroke-width="2"/>'
        )
    elif kind is Kind.MOTIVATION_TRIANGLE:
        out.append(
            f'<polygon points="{fmt_num(box.cx)},{fmt_num(y)} {fmt_num(x)},{fmt_num(y + h)} '
            f'{fmt_num(x + w)},{fmt_num(y + h)}" fill="none" stroke="black"/>'
        )
        for i in range(1, 4):
            ly = y + h * i / 4
            inset = w * i / 8
            out.append(
                f'<line x1="{fmt_num(box.cx - inset)}" y1="{fmt_num(ly)}" '
                f'x2="{fmt_num(box.cx + inset)}" y2="{fmt_num(ly)}" stroke="black"/>'
            )
        from .model import MOTIVATION_LEVELS

        for level, valence in sorted(getattr(el.payload, "markers", ())):
            row = MOTIVATION_LEVELS.index(level)
            my = y + h * (3.5 - row) / 4
            mx = box.cx - 6 if valence == "+" else box.cx + 6
            out.append(f'<circle cx="{fmt_num(mx)}" cy="{fmt_num(my)}" r="4" fill="red"/>')
    elif kind is Kind.ROBINSON_ICON:
        pts = _hexagon(box)
        out.append(f'<polygon points="{pts}" fill="none" stroke="black"/>')
        from .model import ROBINSON_CATEGORIES

        active = getattr(el.payload, "active", frozenset())
        for i, cat in enumerate(ROBINSON_CATEGORIES):
            px, py = _hex_corner(box, i)
            filled = "black" if cat in active else "white"
            out.append(
                f'<circle cx="{fmt_num(px)}" cy="{fmt_num(py)}" r="5" fill="{filled}" '
                'stroke="black"/>'
            )
        out.append(
            f'<text x="{fmt_num(box.cx - 4)}" y="{fmt_num(box.cy + 4)}">'
            f"{_esc(getattr(el.payload, 'valence', '+'))}</text>"
        )
    elif kind in (Kind.SWIRLY_ARRAY, Kind.MODAL_VERB_ICON):
        out.append(
            f'<rect x="{fmt_num(x)}" y="{fmt_num(y)}" width="{fmt_num(w)}" height="{fmt_num(h)}" '
            'fill="none" stroke="black" stroke-dasharray="1,2"/>'
        )
        active = getattr(el.payload, "active", frozenset())
        for name, cx, cy in getattr(el.payload, "cells", ()):
            filled = "black" if name in active else "white"
            out.append(
                f'<circle cx="{fmt_num(x + 12 + cx)}" cy="{fmt_num(y + 12 + cy)}" r="5" '
                f'fill="{filled}" stroke="black"/>'
            )
    elif kind is Kind.LABEL_STRING:
        pass  # text only, emitted below
    elif kind is Kind.TIME_ANCHOR:
        out.append(
            f'<line x1="{fmt_num(x)}" y1="{fmt_num(box.cy)}" x2="{fmt_num(x + 12)}" '
            f'y2="{fmt_num(box.cy)}" stroke="black" stroke-width="1.5"/>'
        )
    elif kind is Kind.ZOOM_BOX_PAIR:
        # Static depiction: a small pane beside its magnified pane, corners tied.
        small = _Box(x, y + h * 0.3, w * 0.3, h * 0.4)
        big = _Box(x + w * 0.45, y, w * 0.55, h)
        for pane in (small, big):
            out.append(
                f'<rect x="{fmt_num(pane.x)}" y="{fmt_num(pane.y)}" width="{fmt_num(pane.w)}" '
                f'height="{fmt_num(pane.h)}" fill="none" stroke="black"/>'
            )
        for sy, by in ((small.y, big.y), (small.y + small.h, big.y + big.h)):
            out.append(
                f'<line x1="{fmt_num(small.x + small.w)}" y1="{fmt_num(sy)}" '
                f'x2="{fmt_num(big.x)}" y2="{fmt_num(by)}" stroke="black" '
                'stroke-dasharray="4,3"/>'
            )
    else:
        borders = 2 if kind is Kind.VERBATIM_BOX else 1
        out.append(
            f'<rect x="{fmt_num(x)}" y="{fmt_num(y)}" width="{fmt_num(w)}" height="{fmt_num(h)}" '
            f'fill="{fill}" stroke="black"/>'
        )
        if borders == 2:
            out.append(
                f'<rect x="{fmt_num(x + 4)}" y="{fmt_num(y + 4)}" width="{fmt_num(w - 8)}" '
                f'height="{fmt_num(h - 8)}" fill="none" stroke="black"/>'
            )
        if kind is Kind.XOR_BOX:
            for dx, dy in ((4, 4), (w - 4, 4), (4, h - 4), (w - 4, h - 4)):
                out.append(
                    f'<circle cx="{fmt_num(x + dx)}" cy="{fmt_num(y + dy)}" r="2.5" fill="black"/>'
                )
        if kind is Kind.CORRELATION_BOX:
            out.append(
                f'<path d="M {fmt_num(x + 6)} {fmt_num(y + h - 8)} Q {fmt_num(box.cx)} '
                f'{fmt_num(y + 4)} {fmt_num(x + w - 6)} {fmt_num(y + 8)}" fill="none" '
                'stroke="black"/>'
            )
        if kind is Kind.CA_AGGREGATION_BOX and getattr(el.payload, "open_ended", False):
            out.append(f'<text x="{fmt_num(box.cx - 8)}" y="{fmt_num(box.cy)}">...</text>')

    label = el.label
    if label:
        ly = y + font + 2 if kind in _BOX_KINDS else box.cy + font / 3
        out.append(f'<text x="{fmt_num(x + 6)}" y="{fmt_num(ly)}" class="label">{_esc(label)}</text>')

    # Attribute lines hang under the element.
    ay = y + h + font
    for binding in d.bindings_of(eid):
        text = f"{binding.attribute} = {value_literal(binding.value)}"
        out.append(f'<text x="{fmt_num(x + 4)}" y="{fmt_num(ay)}" class="attr">{_esc(text)}</text>')
        ay += font + 3

    out.append("</g>")
    return out


def _hexagon(box: _Box) -> str:
    return " ".join(
        f"{fmt_num(px)},{fmt_num(py)}" for px, py in (_hex_corner(box, i) for i in range(6))
    )


_HEX_UNIT = ((0.5, 0.0), (1.0, 0.25), (1.0, 0.75), (0.5, 1.0), (0.0, 0.75), (0.0, 0.25))


def _hex_corner(box: _Box, i: int) -> tuple[float, float]:
    ux, uy = _HEX_UNIT[i % 6]
    return box.x + ux * box.w, box.y + uy * box.h


_EDGE_STYLE = {
    EdgeKind.MOTION: ('stroke="black" stroke-width="2"', True, False),
    EdgeKind.FORCE: ('stroke="black" stroke-width="3.5"', True, False),
    EdgeKind.CAUSATION: ('stroke="black" stroke-width="1.5" stroke-dasharray="8,4"', True, False),
    EdgeKind.TUBE: ('stroke="black" stroke-width="5" stroke-opacity="0.35"', True, False),
    EdgeKind.RELATIONSHIP: ('stroke="black" stroke-width="1.5" stroke-dasharray="2,3"', False, True),
}


def _render_edge(
    d: Diagram, eid: str, edge: Edge, boxes: dict[str, _Box], options: RenderOptions
) -> list[str]:
    style, tip_arrow, centered_arrow = _EDGE_STYLE[edge.kind]
    if edge.source is not None and edge.target is not None and edge.source != edge.target:
        a, b = boxes[edge.source], boxes[edge.target]
        x1, y1, x2, y2 = a.cx, a.cy, b.cx, b.cy
    elif edge.source is not None and edge.target is None:
        a = boxes[edge.source]
        x1, y1, x2, y2 = a.x + a.w, a.cy, a.x + a.w + 48, a.cy
    elif edge.source is None and edge.target is not None:
        b = boxes[edge.target]
        x1, y1, x2, y2 = b.x - 48, b.cy, b.x, b.cy
    elif edge.source is not None:  # self loop
        a = boxes[edge.source]
        loop_marker = ' marker-end="url(#arrowhead)"' if tip_arrow else ""
        out = [f'<g id="{_esc(eid)}" class="edge kind-{edge.kind.value}">']
        out.append(
            f'<path d="M {fmt_num(a.cx)} {fmt_num(a.y)} C {fmt_num(a.cx + 40)} '
            f'{fmt_num(a.y - 36)} {fmt_num(a.cx - 40)} {fmt_num(a.y - 36)} '
            f'{fmt_num(a.cx - 4)} {fmt_num(a.y)}" fill="none" {style}{loop_marker}/>'
        )
        out.extend(_edge_attr_texts(d, eid, a.cx, a.y - 40, options))
        out.append("</g>")
        return out
    else:  # fully solitary arrow
        n = sum(1 for k in sorted(d.edges) if k <= eid)
        x1, y1 = 70.0, 30.0 + n * 26
        x2, y2 = 130.0, 30.0 + n * 26
    out = [f'<g id="{_esc(eid)}" class="edge kind-{edge.kind.value}">']
    marker = ' marker-end="url(#arrowhead)"' if tip_arrow else ""
    out.append(
        f'<line x1="{fmt_num(x1)}" y1="{fmt_num(y1)}" x2="{fmt_num(x2)}" y2="{fmt_num(y2)}" '
        f"{style}{marker}/>"
    )
    if centered_arrow:
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        out.append(
            f'<path class="centered-arrowhead" d="M {fmt_num(mx - 5)} {fmt_num(my - 4)} '
            f'L {fmt_num(mx + 5)} {fmt_num(my)} L {fmt_num(mx - 5)} {fmt_num(my + 4)} z" '
            'fill="black"/>'
        )
    out.extend(_edge_attr_texts(d, eid, (x1 + x2) / 2, (y1 + y2) / 2 - 8, options))
    out.append("</g>")
    return out


def _edge_attr_texts(
    d: Diagram, eid: str, x: float, y: float, options: RenderOptions
) -> list[str]:
    out = []
    for i, binding in enumerate(d.bindings_of(eid)):
        text = f"{binding.attribute} = {value_literal(binding.value)}"
        out.append(
            f'<text x="{fmt_num(x + 6)}" y="{fmt_num(y - i * (options.font_size + 2))}" '
            f'class="attr">{_esc(text)}</text>'
        )
    return out
