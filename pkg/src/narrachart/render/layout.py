"""Base-chart geometry: the four chart forms laid out on a pixel canvas.

The layout resolves every plotted cell to exactly one element geometry (a bar
rectangle or a line vertex) and fixes the scales that overlay placement
resolves positions against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from ..core import ColumnKind, DataTable


class NoNumericColumn(ValueError):
    pass


class CanvasTooSmall(ValueError):
    pass


class ChartType(str, Enum):
    SINGLE_LINE = "single_line"
    MULTI_LINE = "multi_line"
    SINGLE_BAR = "single_bar"
    MULTI_BAR = "multi_bar"

    @property
    def is_bar(self) -> bool:
        return self in (ChartType.SINGLE_BAR, ChartType.MULTI_BAR)


@dataclass(frozen=True)
class Canvas:
    width: float = 800.0
    height: float = 450.0


MIN_CANVAS = (200.0, 150.0)
MARGINS = {"left": 56.0, "right": 16.0, "top": 48.0, "bottom": 40.0}

SERIES_COLORS = (
    "#4c78a8", "#f58518", "#54a24b", "#e45756",
    "#72b7b2", "#b279a2", "#9d755d", "#bab0ac",
)


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    def intersects(self, other: "Rect") -> bool:
        return (
            self.x < other.right
            and other.x < self.right
            and self.y < other.bottom
            and other.y < self.bottom
        )

    def contains_rect(self, other: "Rect", slack: float = 1e-6) -> bool:
        return (
            other.x >= self.x - slack
            and other.y >= self.y - slack
            and other.right <= self.right + slack
            and other.bottom <= self.bottom + slack
        )


@dataclass(frozen=True)
class LinearScale:
    """Maps data values to pixel y, top of the plot being the domain max."""

    lo: float
    hi: float
    px_top: float
    px_bottom: float

    def y(self, value: float) -> float:
        if self.hi == self.lo:
            return self.px_bottom
        frac = (value - self.lo) / (self.hi - self.lo)
        return self.px_bottom - frac * (self.px_bottom - self.px_top)

    def clamp_y(self, y: float) -> float:
        return min(max(y, self.px_top), self.px_bottom)


@dataclass(frozen=True)
class ElementGeom:
    """Geometry of one plotted cell: a bar rect or a line vertex."""

    column: str
    row: int
    anchor_x: float
    anchor_y: float
    bar: Optional[Rect] = None


@dataclass
class BaseChartLayout:
    canvas: Canvas
    plot: Rect
    chart_type: ChartType
    table: DataTable
    columns: tuple[str, ...]
    x_centers: list[float]
    band_width: float
    y_scale: LinearScale
    elements: dict[tuple[str, int], ElementGeom]
    x_ticks: list[tuple[float, str]]
    y_ticks: list[tuple[float, str]]
    title: str
    title_box: Rect
    legend_box: Optional[Rect]
    legend_items: list[tuple[str, str]]
    base_colors: dict[str, str]

    def element(self, column: str, row: int) -> ElementGeom:
        return self.elements[(column, row)]

    def has_element(self, column: str, row: int) -> bool:
        return (column, row) in self.elements

    def column_elements(self, column: str) -> list[ElementGeom]:
        return [g for (c, _), g in sorted(self.elements.items()) if c == column]

    def band_bounds(self, row: int) -> tuple[float, float]:
        """Outer x bounds of a row band."""
        center = self.x_centers[row - 1]
        return (center - self.band_width / 2, center + self.band_width / 2)


def _x_axis_column(table: DataTable) -> Optional[str]:
    for kind in (ColumnKind.TEMPORAL, ColumnKind.CATEGORICAL):
        for col in table.columns:
            if col.kind is kind:
                return col.name
    return None


def choose_chart_type(
    table: DataTable,
    columns: Optional[Sequence[str]] = None,
    explicit: Optional[ChartType | str] = None,
) -> ChartType:
    """Pick a base chart form: lines for long continuous x, bars otherwise."""
    if explicit is not None:
        return ChartType(explicit)
    plotted = list(columns) if columns else [c.name for c in table.numeric_columns()]
    if not plotted:
        raise NoNumericColumn("no numeric column to plot")
    multi = len(plotted) >= 2
    x_col = _x_axis_column(table)
    x_kind = table.column(x_col).kind if x_col else None
    barish = x_kind is ColumnKind.CATEGORICAL or table.row_count <= 8
    if barish:
        return ChartType.MULTI_BAR if multi else ChartType.SINGLE_BAR
    return ChartType.MULTI_LINE if multi else ChartType.SINGLE_LINE


def _nice_step(span: float, target: int = 5) -> float:
    if span <= 0:
        return 1.0
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        if raw <= mult * mag:
            return mult * mag
    return 10 * mag


def _fmt_tick(v: float) -> str:
    if abs(v) >= 1 or v == 0:
        return f"{v:g}"
    return f"{v:.2f}".rstrip("0").rstrip(".")


def layout_base_chart(
    table: DataTable,
    columns: Optional[Sequence[str]] = None,
    chart_type: Optional[ChartType | str] = None,
    canvas: Optional[Canvas] = None,
    title: Optional[str] = None,
) -> BaseChartLayout:
    """Deterministic layout of the base chart on the canvas."""
    canvas = canvas or Canvas()
    if canvas.width < MIN_CANVAS[0] or canvas.height < MIN_CANVAS[1]:
        raise CanvasTooSmall(
            f"canvas {canvas.width}x{canvas.height} below minimum "
            f"{MIN_CANVAS[0]}x{MIN_CANVAS[1]}"
        )
    plotted = tuple(columns) if columns else tuple(
        c.name for c in table.numeric_columns()
    )
    if not plotted:
        raise NoNumericColumn("no numeric column to plot")
    ctype = ChartType(chart_type) if chart_type else choose_chart_type(table, plotted)

    plot = Rect(
        MARGINS["left"],
        MARGINS["top"],
        canvas.width - MARGINS["left"] - MARGINS["right"],
        canvas.height - MARGINS["top"] - MARGINS["bottom"],
    )

    values = [
        float(v)
        for name in plotted
        for v in table.column_values(name)
        if isinstance(v, (int, float)) and not isinstance(v, bool)
    ]
    dmin = min(values) if values else 0.0
    dmax = max(values) if values else 1.0
    lo = min(0.0, dmin)
    hi = dmax
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    scale = LinearScale(lo - pad, hi + pad, plot.y, plot.bottom)

    n = table.row_count
    band = plot.w / n
    x_centers = [plot.x + band * (i + 0.5) for i in range(n)]

    elements: dict[tuple[str, int], ElementGeom] = {}
    bar_slot = band * 0.8
    sub = bar_slot / len(plotted) if plotted else bar_slot
    for ci, name in enumerate(plotted):
        col_values = table.column_values(name)
        for row in range(1, n + 1):
            v = col_values[row - 1]
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                continue
            v = float(v)
            if ctype.is_bar:
                x0 = x_centers[row - 1] - bar_slot / 2 + ci * sub
                y_val = scale.y(v)
                y_base = scale.y(0.0)
                top = min(y_val, y_base)
                rect = Rect(x0, top, sub, abs(y_base - y_val))
                elements[(name, row)] = ElementGeom(
                    name, row, x0 + sub / 2, y_val, bar=rect
                )
            else:
                elements[(name, row)] = ElementGeom(
                    name, row, x_centers[row - 1], scale.y(v)
                )

    x_col = _x_axis_column(table)
    raw_labels = (
        [str(v) if v is not None else "" for v in table.column_values(x_col)]
        if x_col
        else [str(i) for i in range(1, n + 1)]
    )
    stride = max(1, math.ceil(n / 10))
    x_ticks = [
        (x_centers[i], raw_labels[i]) for i in range(0, n, stride)
    ]

    y_ticks = []
    step = _nice_step(scale.hi - scale.lo)
    tick = math.ceil(scale.lo / step) * step
    while tick <= scale.hi + 1e-9:
        y_ticks.append((scale.y(tick), _fmt_tick(tick)))
        tick += step

    base_colors = {
        name: SERIES_COLORS[i % len(SERIES_COLORS)] for i, name in enumerate(plotted)
    }

    title_text = title if title is not None else table.name
    title_box = Rect(plot.x, 10.0, plot.w, 24.0)
    legend_items = [(name, base_colors[name]) for name in plotted] if len(plotted) > 1 else []
    legend_box = None
    if legend_items:
        width = max(len(name) for name, _ in legend_items) * 6.8 + 26
        height = len(legend_items) * 16.0 + 6
        legend_box = Rect(plot.right - width - 4, plot.y + 4, width, height)

    return BaseChartLayout(
        canvas=canvas,
        plot=plot,
        chart_type=ctype,
        table=table,
        columns=plotted,
        x_centers=x_centers,
        band_width=band,
        y_scale=scale,
        elements=elements,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        title=title_text,
        title_box=title_box,
        legend_box=legend_box,
        legend_items=legend_items,
        base_colors=base_colors,
    )
