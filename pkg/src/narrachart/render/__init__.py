from .layout import (
    BaseChartLayout,
    Canvas,
    CanvasTooSmall,
    ChartType,
    LinearScale,
    NoNumericColumn,
    Rect,
    choose_chart_type,
    layout_base_chart,
)
from .svg import render_svg
from .raster import render_png
from .gif import DEFAULT_FRAME_MS, DimensionMismatch, EmptyFrameList, export_gif
from .sequence import ChartConfig, LayeredChartSpec, sequence_charts, specs_from_binding

__all__ = [
    "BaseChartLayout",
    "Canvas",
    "CanvasTooSmall",
    "ChartConfig",
    "ChartType",
    "DEFAULT_FRAME_MS",
    "DimensionMismatch",
    "EmptyFrameList",
    "LayeredChartSpec",
    "LinearScale",
    "NoNumericColumn",
    "Rect",
    "choose_chart_type",
    "export_gif",
    "layout_base_chart",
    "render_png",
    "render_svg",
    "sequence_charts",
    "specs_from_binding",
]
