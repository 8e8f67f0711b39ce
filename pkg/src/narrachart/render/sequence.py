"""One layered chart per narrative, sharing a single base chart layout and
ordered by the narrative sequence."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from ..core import BindingResult, DataTable
from ..overlay.palette import Palette
from ..overlay.specs import OverlaySpec, assign_overlay_ids, overlays_for
from ..trendlex import Lexicon, default_lexicon
from .gif import DEFAULT_FRAME_MS
from .layout import BaseChartLayout, Canvas, ChartType, layout_base_chart


@dataclass(frozen=True)
class ChartConfig:
    canvas: Canvas = Canvas()
    chart_type: Optional[ChartType] = None
    columns: Optional[tuple[str, ...]] = None
    frame_duration_ms: int = DEFAULT_FRAME_MS
    title: Optional[str] = None
    palette: Palette = Palette()


@dataclass(frozen=True)
class LayeredChartSpec:
    narrative_id: str
    order: int
    chart_type: ChartType
    columns: tuple[str, ...]
    overlays: tuple[OverlaySpec, ...]
    user_edits: tuple[dict, ...] = ()
    note: Optional[str] = None
    chart_id: str = ""


def specs_from_binding(
    result: BindingResult,
    table: DataTable,
    lexicon: Optional[Lexicon] = None,
) -> list[OverlaySpec]:
    """Overlay specs for every record of a binding, accents cycling per record."""
    lexicon = lexicon or default_lexicon()
    specs: list[OverlaySpec] = []
    for idx, rec in enumerate(result.records):
        trend = None
        if rec.trend is not None:
            hit = lexicon.classify(rec.trend)
            trend = hit[0] if hit else None
        specs.extend(
            overlays_for(rec, trend=trend, table=table, source_index=idx)
        )
    return assign_overlay_ids(specs)


def sequence_charts(
    bound: Sequence[tuple],
    table: DataTable,
    config: Optional[ChartConfig] = None,
    lexicon: Optional[Lexicon] = None,
) -> tuple[BaseChartLayout, list[LayeredChartSpec]]:
    """Build the shared base layout plus one layered chart spec per narrative.

    ``bound`` holds (narrative, binding-or-None) pairs; a missing binding
    yields a plain base chart with a diagnostic note.
    """
    config = config or ChartConfig()
    lexicon = lexicon or default_lexicon()
    layout = layout_base_chart(
        table,
        columns=config.columns,
        chart_type=config.chart_type,
        canvas=config.canvas,
        title=config.title,
    )
    charts: list[LayeredChartSpec] = []
    for narrative, result in sorted(bound, key=lambda pair: pair[0].order):
        if result is None:
            charts.append(
                LayeredChartSpec(
                    narrative_id=narrative.id,
                    order=narrative.order,
                    chart_type=layout.chart_type,
                    columns=layout.columns,
                    overlays=(),
                    note="binding failed; plain base chart",
                    chart_id=narrative.id,
                )
            )
            continue
        # overlays come only from this narrative's own records
        work_table = table
        from ..core import augment_table

        work_table = augment_table(table, result)
        specs = tuple(specs_from_binding(result, work_table, lexicon))
        charts.append(
            LayeredChartSpec(
                narrative_id=narrative.id,
                order=narrative.order,
                chart_type=layout.chart_type,
                columns=layout.columns,
                overlays=specs,
                chart_id=narrative.id,
            )
        )
    return layout, charts
