"""Byte-deterministic SVG 1.1 output. Base chart groups come first, the
overlay layer is the final group so it composites above everything."""

from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from ..overlay.palette import Palette, StyledChart, apply_palette
from ..overlay.place import ArrowLine, Circle, HLine, PlacedOverlay, TextBox, VLine
from ..overlay.specs import OverlayKind
from .layout import BaseChartLayout, Rect

FONT_FAMILY = "Helvetica, Arial, sans-serif"
FONT_SIZE = 12
AXIS_COLOR = "#555555"
GRID_COLOR = "#dddddd"


def _n(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _line(x1, y1, x2, y2, stroke, width=1.0, dashed=False) -> str:
    dash = ' stroke-dasharray="5,4"' if dashed else ""
    return (
        f'<line x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}" '
        f'stroke="{stroke}" stroke-width="{_n(width)}"{dash} />'
    )


def _text(x, y, content, *, fill="#333333", anchor="middle", size=FONT_SIZE, bold=False) -> str:
    weight = ' font-weight="bold"' if bold else ""
    return (
        f'<text x="{_n(x)}" y="{_n(y)}" text-anchor="{anchor}" '
        f'font-size="{size}" fill="{fill}"{weight}>{escape(content)}</text>'
    )


def _rect(r: Rect, *, fill=None, stroke=None, width=1.0, opacity=None) -> str:
    parts = [
        f'<rect x="{_n(r.x)}" y="{_n(r.y)}" width="{_n(r.w)}" height="{_n(r.h)}"'
    ]
    parts.append(f' fill="{fill}"' if fill else ' fill="none"')
    if stroke:
        parts.append(f' stroke="{stroke}" stroke-width="{_n(width)}"')
    if opacity is not None:
        parts.append(f' opacity="{_n(opacity)}"')
    parts.append(" />")
    return "".join(parts)


def _overlay_element(p: PlacedOverlay) -> list[str]:
    g = p.geometry
    s = p.style
    if p.spec.kind is OverlayKind.HIGHLIGHT or s.opacity == 0.0:
        return []
    out = []
    if isinstance(g, Circle):
        out.append(
            f'<circle cx="{_n(g.cx)}" cy="{_n(g.cy)}" r="{_n(g.r)}" '
            f'fill="{s.fill or s.stroke}" stroke="{s.stroke}" '
            f'stroke-width="{_n(s.stroke_width)}" />'
        )
    elif isinstance(g, Rect):
        out.append(
            _rect(g, fill=s.fill, stroke=s.stroke, width=s.stroke_width,
                  opacity=s.opacity if s.opacity != 1.0 else None)
        )
    elif isinstance(g, ArrowLine):
        out.append(_line(g.x1, g.y1, g.x2, g.y2, s.stroke, s.stroke_width))
        if g.head:
            pts = " ".join(f"{_n(x)},{_n(y)}" for x, y in g.head)
            out.append(f'<polygon points="{pts}" fill="{s.fill or s.stroke}" />')
    elif isinstance(g, HLine):
        out.append(_line(g.x1, g.y, g.x2, g.y, s.stroke, s.stroke_width, dashed=g.dashed))
    elif isinstance(g, VLine):
        out.append(_line(g.x, g.y1, g.x, g.y2, s.stroke, s.stroke_width, dashed=g.dashed))
    elif isinstance(g, TextBox):
        out.append(_rect(g.rect, fill="#ffffff", opacity=0.75))
        out.append(
            _text(
                g.x + g.w / 2, g.y + g.h - 5, g.text,
                fill=s.fill or "#111111", anchor="middle",
            )
        )
    return out


def render_svg(
    layout: BaseChartLayout,
    placed: list[PlacedOverlay] | tuple[PlacedOverlay, ...] = (),
    styled: Optional[StyledChart] = None,
    palette: Optional[Palette] = None,
) -> str:
    """Render the layered chart; pass ``styled`` to reuse a palette pass."""
    chart = styled or apply_palette(layout, list(placed), palette)
    colors = chart.series_colors
    c = layout.canvas
    lines: list[str] = []
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(c.width)}" '
        f'height="{_n(c.height)}" viewBox="0 0 {_n(c.width)} {_n(c.height)}" '
        f'font-family={quoteattr(FONT_FAMILY)}>'
    )
    lines.append(_rect(Rect(0, 0, c.width, c.height), fill="#ffffff"))

    lines.append('<g id="axes">')
    for y, label in layout.y_ticks:
        lines.append(_line(layout.plot.x, y, layout.plot.right, y, GRID_COLOR, 0.5))
        lines.append(_text(layout.plot.x - 6, y + 4, label, fill=AXIS_COLOR, anchor="end", size=10))
    lines.append(
        _line(layout.plot.x, layout.plot.y, layout.plot.x, layout.plot.bottom, AXIS_COLOR)
    )
    lines.append(
        _line(layout.plot.x, layout.plot.bottom, layout.plot.right, layout.plot.bottom, AXIS_COLOR)
    )
    for x, label in layout.x_ticks:
        lines.append(_text(x, layout.plot.bottom + 16, label, fill=AXIS_COLOR, size=10))
    lines.append("</g>")

    lines.append('<g id="series">')
    for name in layout.columns:
        color = colors.get(name, "#888888")
        elems = layout.column_elements(name)
        if layout.chart_type.is_bar:
            for g in elems:
                if g.bar is not None:
                    lines.append(_rect(g.bar, fill=color))
        else:
            run: list[str] = []
            prev_row = None
            for g in elems:
                if prev_row is not None and g.row != prev_row + 1:
                    if len(run) >= 2:
                        lines.append(
                            f'<polyline points="{" ".join(run)}" fill="none" '
                            f'stroke="{color}" stroke-width="2" />'
                        )
                    run = []
                run.append(f"{_n(g.anchor_x)},{_n(g.anchor_y)}")
                prev_row = g.row
            if len(run) >= 2:
                lines.append(
                    f'<polyline points="{" ".join(run)}" fill="none" '
                    f'stroke="{color}" stroke-width="2" />'
                )
            for g in elems:
                lines.append(
                    f'<circle cx="{_n(g.anchor_x)}" cy="{_n(g.anchor_y)}" r="2.5" '
                    f'fill="{color}" stroke="{color}" stroke-width="1" />'
                )
    lines.append("</g>")

    if layout.title:
        lines.append('<g id="title">')
        lines.append(
            _text(
                layout.title_box.x + layout.title_box.w / 2,
                layout.title_box.y + 16,
                layout.title,
                fill="#222222",
                size=15,
                bold=True,
            )
        )
        lines.append("</g>")

    if layout.legend_box is not None:
        lines.append('<g id="legend">')
        box = layout.legend_box
        lines.append(_rect(box, fill="#ffffff", stroke=GRID_COLOR, opacity=0.85))
        for i, (name, _) in enumerate(layout.legend_items):
            y = box.y + 14 + i * 16
            swatch = Rect(box.x + 6, y - 8, 10, 10)
            lines.append(_rect(swatch, fill=colors.get(name, "#888888")))
            lines.append(_text(box.x + 22, y + 1, name, fill="#333333", anchor="start", size=10))
        lines.append("</g>")

    lines.append('<g id="overlay-layer">')
    ordered = sorted(
        chart.placed,
        key=lambda p: 0 if p.spec.kind is OverlayKind.BACKGROUND else 1,
    )
    for p in ordered:
        lines.extend(_overlay_element(p))
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
