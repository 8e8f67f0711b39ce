"""Color treatment: desaturate non-highlighted series, saturated accents for
annotation strokes. Accents cycle per source record so one claim's overlays
share a color."""

from __future__ import annotations

import colorsys
import json
from dataclasses import dataclass, replace
from typing import Optional

from ..render.layout import BaseChartLayout
from .place import PlacedOverlay, Style
from .specs import OverlayKind


@dataclass(frozen=True)
class Palette:
    accents: tuple[str, ...] = ("#d62728", "#000000", "#1f77b4", "#ff7f0e")
    desaturation: float = 0.25
    nudge_step: float = 8.0
    marker_radius: float = 2.0

    def __post_init__(self):
        if not 0 < self.desaturation <= 1:
            raise ValueError("desaturation must be in (0, 1]")

    def accent(self, source_index: int) -> str:
        return self.accents[source_index % len(self.accents)]


def load_palette(path: Optional[str] = None) -> Palette:
    """Palette from a JSON config {desaturation, accents, nudgeStep, markerRadius}."""
    if path is None:
        return Palette()
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    base = Palette()
    return Palette(
        accents=tuple(obj.get("accents", base.accents)),
        desaturation=float(obj.get("desaturation", base.desaturation)),
        nudge_step=float(obj.get("nudgeStep", base.nudge_step)),
        marker_radius=float(obj.get("markerRadius", base.marker_radius)),
    )


def _hex_to_rgb(color: str) -> tuple[float, float, float]:
    c = color.lstrip("#")
    if len(c) == 3:
        c = "".join(ch * 2 for ch in c)
    return tuple(int(c[i : i + 2], 16) / 255.0 for i in (0, 2, 4))  # type: ignore[return-value]


def _rgb_to_hex(rgb: tuple[float, float, float]) -> str:
    return "#" + "".join(f"{round(max(0.0, min(1.0, v)) * 255):02x}" for v in rgb)


def desaturate(color: str, fraction: float) -> str:
    """Multiply the color's HLS saturation by ``fraction``."""
    h, l, s = colorsys.rgb_to_hls(*_hex_to_rgb(color))
    return _rgb_to_hex(colorsys.hls_to_rgb(h, l, s * fraction))


@dataclass(frozen=True)
class StyledChart:
    layout: BaseChartLayout
    series_colors: dict[str, str]
    placed: tuple[PlacedOverlay, ...]


def apply_palette(
    layout: BaseChartLayout,
    placed: list[PlacedOverlay] | tuple[PlacedOverlay, ...],
    palette: Optional[Palette] = None,
) -> StyledChart:
    """Style the chart: highlighted columns keep full saturation, the rest
    desaturate; annotation strokes take saturated accent colors.

    Pure and idempotent: styles are computed from the layout's base colors,
    never from previously applied styles.
    """
    palette = palette or Palette()
    highlighted: set[str] = set()
    for p in placed:
        if p.spec.kind is OverlayKind.HIGHLIGHT:
            if p.spec.column in layout.columns:
                highlighted.add(p.spec.column)
            else:
                from ..core import derived_parts

                parts = derived_parts(p.spec.column, layout.table)
                if parts:
                    highlighted.update(parts)
    series_colors = {}
    for name, base in layout.base_colors.items():
        if not highlighted or name in highlighted:
            series_colors[name] = base
        else:
            series_colors[name] = desaturate(base, palette.desaturation)

    styled = []
    for p in placed:
        accent = palette.accent(p.spec.source_index)
        kind = p.spec.kind
        if kind is OverlayKind.HIGHLIGHT:
            style = Style(stroke=None, fill=None, opacity=0.0)
        elif kind is OverlayKind.MARKER:
            style = Style(stroke=accent, fill=accent, stroke_width=1.0)
        elif kind is OverlayKind.LABEL:
            style = Style(stroke=None, fill=accent)
        elif kind is OverlayKind.DESCRIPTION:
            style = Style(stroke=None, fill="#111111")
        elif kind is OverlayKind.TREND_LINE:
            style = Style(stroke=accent, fill=accent, stroke_width=2.0)
        elif kind is OverlayKind.OVERALL_INDICATOR:
            style = Style(stroke=accent, stroke_width=1.5)
        elif kind is OverlayKind.SPECIAL_TIME_POINT:
            style = Style(stroke=accent, stroke_width=1.5)
        elif kind is OverlayKind.BACKGROUND:
            style = Style(stroke=None, fill=accent, opacity=0.12)
        elif kind is OverlayKind.BOUNDING_BOX:
            style = Style(stroke=accent, fill=None, stroke_width=1.5)
        else:  # pragma: no cover
            style = Style()
        styled.append(replace(p, style=style))
    return StyledChart(
        layout=layout, series_colors=series_colors, placed=tuple(styled)
    )
