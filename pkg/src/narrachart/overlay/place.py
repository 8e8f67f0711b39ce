"""Resolve overlay specs to pixel geometry on a base chart layout.

Markers sit at the value end of their element (top center of a bar, the
vertex of a line). Labels and descriptions are boxes aligned with the top
edge of the plot at their anchor's x; boxes that would overlap another box
or leave the canvas nudge downward in fixed steps until free, then clamp.
Trend lines are straight arrows from the first to the last data point of
their span.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from ..core import derived_parts
from ..render.layout import BaseChartLayout, Rect
from .specs import OverlayKind, OverlaySpec


class TargetNotInLayout(KeyError):
    pass


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float


@dataclass(frozen=True)
class ArrowLine:
    x1: float
    y1: float
    x2: float
    y2: float
    head: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class HLine:
    x1: float
    x2: float
    y: float
    dashed: bool = True


@dataclass(frozen=True)
class VLine:
    x: float
    y1: float
    y2: float
    dashed: bool = True


@dataclass(frozen=True)
class TextBox:
    x: float
    y: float
    w: float
    h: float
    text: str

    @property
    def rect(self) -> Rect:
        return Rect(self.x, self.y, self.w, self.h)


Geometry = Union[Circle, Rect, ArrowLine, HLine, VLine, TextBox]


@dataclass(frozen=True)
class Style:
    stroke: Optional[str] = "#333333"
    fill: Optional[str] = None
    stroke_width: float = 1.0
    opacity: float = 1.0


@dataclass(frozen=True)
class PlacedOverlay:
    spec: OverlaySpec
    geometry: Geometry
    style: Style = Style()


@dataclass
class PlacementOverrides:
    """User-edit state consulted during placement."""

    positions: dict[str, tuple[float, float]] = field(default_factory=dict)
    texts: dict[str, str] = field(default_factory=dict)
    marker_radius: dict[str, float] = field(default_factory=dict)
    hidden: set[str] = field(default_factory=set)


DEFAULT_MARKER_RADIUS = 2.0
NUDGE_STEP = 8.0
ARROW_HEAD = 6.0
FONT_WIDTH = 6.8
BOX_HEIGHT = 18.0
LABEL_MAX_CHARS = 24
DESC_MAX_CHARS = 46


def _resolve_columns(layout: BaseChartLayout, column: str) -> list[str]:
    if column in layout.columns:
        return [column]
    parts = derived_parts(column, layout.table)
    if parts and all(p in layout.columns for p in parts):
        return parts
    raise TargetNotInLayout(f"column {column!r} is not plotted on the base chart")


def _anchor(layout: BaseChartLayout, column: str, row: int) -> tuple[float, float]:
    if not layout.has_element(column, row):
        raise TargetNotInLayout(f"no element for column {column!r} row {row}")
    g = layout.element(column, row)
    return (g.anchor_x, g.anchor_y)


def _column_bbox(layout: BaseChartLayout, columns: list[str]) -> Rect:
    xs, ys, xe, ye = [], [], [], []
    for col in columns:
        for g in layout.column_elements(col):
            if g.bar is not None:
                xs.append(g.bar.x)
                ys.append(g.bar.y)
                xe.append(g.bar.right)
                ye.append(g.bar.bottom)
            else:
                xs.append(g.anchor_x)
                ys.append(g.anchor_y)
                xe.append(g.anchor_x)
                ye.append(g.anchor_y)
    if not xs:
        raise TargetNotInLayout(f"columns {columns!r} have no elements")
    x0, y0 = min(xs), min(ys)
    return Rect(x0, y0, max(xe) - x0, max(ye) - y0)


def _text_box_size(text: str, max_chars: int) -> tuple[float, float]:
    shown = text if len(text) <= max_chars else text[: max_chars - 1] + "…"
    return (len(shown) * FONT_WIDTH + 10.0, BOX_HEIGHT)


def _truncate(text: str, max_chars: int) -> str:
    return text if len(text) <= max_chars else text[: max_chars - 1] + "…"


class _BoxPlacer:
    """Downward-nudging collision resolution for text boxes."""

    def __init__(self, layout: BaseChartLayout, nudge: float):
        self.canvas = layout.canvas
        self.plot = layout.plot
        self.nudge = nudge
        self.taken: list[Rect] = []

    def reserve(self, rect: Rect) -> None:
        self.taken.append(rect)

    def place(self, x: float, y: float, w: float, h: float, fixed: bool = False) -> Rect:
        x = min(max(x, 0.0), max(self.canvas.width - w, 0.0))
        y = min(max(y, 0.0), max(self.canvas.height - h, 0.0))
        box = Rect(x, y, w, h)
        if fixed:
            self.taken.append(box)
            return box
        start_x = x
        for _ in range(64):
            free = not any(box.intersects(t) for t in self.taken)
            inside = box.bottom <= self.canvas.height
            if free and inside:
                break
            if not inside or box.bottom + self.nudge > self.canvas.height + BOX_HEIGHT * 4:
                # column exhausted: shift right (wrapping) and restart at the top
                start_x = start_x + w + 4.0
                if start_x + w > self.canvas.width:
                    start_x = 0.0
                box = Rect(start_x, self.plot.y, w, h)
            else:
                box = Rect(box.x, box.y + self.nudge, w, h)
        else:
            box = Rect(box.x, min(box.y, self.canvas.height - h), w, h)
        self.taken.append(box)
        return box


def place_overlays(
    specs: list[OverlaySpec],
    layout: BaseChartLayout,
    overrides: Optional[PlacementOverrides] = None,
    marker_radius: float = DEFAULT_MARKER_RADIUS,
    nudge_step: float = NUDGE_STEP,
) -> list[PlacedOverlay]:
    """Compute geometry for every spec; raises TargetNotInLayout for specs
    referencing columns or rows absent from the base chart."""
    ov = overrides or PlacementOverrides()
    placer = _BoxPlacer(layout, nudge_step)
    if layout.legend_box is not None:
        placer.reserve(layout.legend_box)
    placed: list[PlacedOverlay] = []
    deferred_boxes: list[tuple[OverlaySpec, float, float, str]] = []

    def emit(spec: OverlaySpec, geometry: Geometry) -> None:
        placed.append(PlacedOverlay(spec, geometry))

    for spec in specs:
        if spec.overlay_id in ov.hidden:
            continue
        columns = _resolve_columns(layout, spec.column)
        kind = spec.kind
        if kind is OverlayKind.HIGHLIGHT:
            emit(spec, _column_bbox(layout, columns))
        elif kind is OverlayKind.MARKER:
            radius = ov.marker_radius.get(spec.overlay_id, marker_radius)
            for col in columns:
                x, y = _anchor(layout, col, spec.row_start)
                emit(spec, Circle(x, y, radius))
        elif kind is OverlayKind.LABEL:
            x, _ = _anchor(layout, columns[0], spec.row_start)
            text = ov.texts.get(spec.overlay_id, spec.text_content or "")
            deferred_boxes.append((spec, x, layout.plot.y, _truncate(text, LABEL_MAX_CHARS)))
        elif kind is OverlayKind.DESCRIPTION:
            anchors = []
            for col in columns:
                for row in (spec.row_start, spec.row_end):
                    if layout.has_element(col, row):
                        anchors.append(layout.element(col, row).anchor_x)
            mid = sum(anchors) / len(anchors) if anchors else layout.plot.x
            text = ov.texts.get(spec.overlay_id, spec.text_content or "")
            deferred_boxes.append((spec, mid, layout.plot.y, _truncate(text, DESC_MAX_CHARS)))
        elif kind is OverlayKind.TREND_LINE:
            col = columns[0]
            x1, y1 = _anchor(layout, col, spec.row_start)
            x2, y2 = _anchor(layout, col, spec.row_end)
            emit(spec, ArrowLine(x1, y1, x2, y2, head=_arrow_head(x1, y1, x2, y2)))
        elif kind is OverlayKind.OVERALL_INDICATOR:
            value = spec.statistic[1] if spec.statistic else None
            if value is None:
                y = (layout.plot.y + layout.plot.bottom) / 2
            else:
                y = layout.y_scale.clamp_y(layout.y_scale.y(value))
            emit(spec, HLine(layout.plot.x, layout.plot.right, y))
            if spec.text_content:
                text = ov.texts.get(spec.overlay_id, spec.text_content)
                w, h = _text_box_size(text, LABEL_MAX_CHARS)
                mid_x = layout.plot.x + layout.plot.w / 2 - w / 2
                deferred_boxes.append(
                    (replace(spec, kind=OverlayKind.LABEL, overlay_id=spec.overlay_id + ":label"),
                     mid_x + w / 2, max(y - h - 2.0, 0.0), _truncate(text, LABEL_MAX_CHARS))
                )
        elif kind is OverlayKind.SPECIAL_TIME_POINT:
            x, _ = _anchor(layout, columns[0], spec.row_start)
            emit(spec, VLine(x, layout.plot.y, layout.plot.bottom))
        elif kind is OverlayKind.BACKGROUND:
            x0 = min(layout.band_bounds(spec.row_start)[0], layout.band_bounds(spec.row_end)[0])
            x1 = max(layout.band_bounds(spec.row_start)[1], layout.band_bounds(spec.row_end)[1])
            emit(spec, Rect(x0, layout.plot.y, x1 - x0, layout.plot.h))
        elif kind is OverlayKind.BOUNDING_BOX:
            boxes = []
            for col in columns:
                for row in range(spec.row_start, spec.row_end + 1):
                    if layout.has_element(col, row):
                        g = layout.element(col, row)
                        boxes.append(g.bar or Rect(g.anchor_x - 2, g.anchor_y - 2, 4, 4))
            if not boxes:
                raise TargetNotInLayout(
                    f"no elements in rows {spec.row_start}-{spec.row_end} of {spec.column!r}"
                )
            x0 = min(b.x for b in boxes) - 3
            y0 = min(b.y for b in boxes) - 3
            x1 = max(b.right for b in boxes) + 3
            y1 = max(b.bottom for b in boxes) + 3
            x0, y0 = max(x0, 0.0), max(y0, 0.0)
            x1 = min(x1, layout.canvas.width)
            y1 = min(y1, layout.canvas.height)
            emit(spec, Rect(x0, y0, x1 - x0, y1 - y0))
        else:  # pragma: no cover - enum is exhaustive
            raise ValueError(f"unknown overlay kind {kind}")

    # text boxes last: fixed (user-moved) boxes first, then autos nudge around them
    fixed_first = sorted(
        deferred_boxes, key=lambda t: t[0].overlay_id not in ov.positions
    )
    boxed: list[PlacedOverlay] = []
    for spec, cx, top, text in fixed_first:
        w, h = _text_box_size(text, 10**6)
        if spec.overlay_id in ov.positions:
            px, py = ov.positions[spec.overlay_id]
            rect = placer.place(px, py, w, h, fixed=True)
        else:
            rect = placer.place(cx - w / 2, top, w, h)
        boxed.append(PlacedOverlay(spec, TextBox(rect.x, rect.y, rect.w, rect.h, text)))
    order = {id(t[0]): i for i, t in enumerate(deferred_boxes)}
    boxed.sort(key=lambda p: order[id(p.spec)])
    placed.extend(boxed)
    return placed


def _arrow_head(
    x1: float, y1: float, x2: float, y2: float, size: float = ARROW_HEAD
) -> tuple[tuple[float, float], ...]:
    import math

    angle = math.atan2(y2 - y1, x2 - x1)
    left = angle + math.radians(150)
    right = angle - math.radians(150)
    return (
        (x2, y2),
        (x2 + size * math.cos(left), y2 + size * math.sin(left)),
        (x2 + size * math.cos(right), y2 + size * math.sin(right)),
    )
