"""The nine overlay kinds and the default vocabulary-to-overlay mapping.

Defaults: subject vocabulary highlights its bound column; numerical values get
a marker plus a short label; change-pattern trends get a trend line plus a
description; summary indicators get a reference line; special events get a
vertical time marker. A record that also carries subject context contributes
the highlight on top of its own overlays.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from ..core import BindingRecord, DataTable, VocabKind
from ..trendlex import (
    PatternId,
    TrendKind,
    default_lexicon,
    kind_of,
    summary_statistic,
)
from ..wire import format_number


class OverlayKind(str, Enum):
    HIGHLIGHT = "highlight"
    BOUNDING_BOX = "bounding_box"
    BACKGROUND = "background"
    MARKER = "marker"
    LABEL = "label"
    DESCRIPTION = "description"
    TREND_LINE = "trend_line"
    OVERALL_INDICATOR = "overall_indicator"
    SPECIAL_TIME_POINT = "special_time_point"


#: statistic reported by each summary pattern
_STAT_NAME = {
    PatternId.MEAN_LEVEL: "mean",
    PatternId.GLOBAL_MAX: "max",
    PatternId.GLOBAL_MIN: "min",
}


@dataclass(frozen=True)
class OverlaySpec:
    kind: OverlayKind
    column: str
    row_start: int
    row_end: int
    text_content: Optional[str] = None
    statistic: Optional[tuple[str, float]] = None
    source_index: int = 0
    overlay_id: str = ""


def correspondence(
    vocab: VocabKind | str, trend_kind: Optional[TrendKind | str] = None
) -> tuple[OverlayKind, ...]:
    """The default overlay combination for one vocabulary occurrence."""
    vocab = VocabKind(vocab)
    if vocab is VocabKind.SUBJECT:
        return (OverlayKind.HIGHLIGHT,)
    if vocab is VocabKind.NUMERICAL:
        return (OverlayKind.MARKER, OverlayKind.LABEL)
    kind = TrendKind(trend_kind) if trend_kind is not None else TrendKind.CHANGE_PATTERN
    if kind is TrendKind.CHANGE_PATTERN:
        return (OverlayKind.TREND_LINE, OverlayKind.DESCRIPTION)
    if kind is TrendKind.SUMMARY_INDICATOR:
        return (OverlayKind.OVERALL_INDICATOR,)
    return (OverlayKind.SPECIAL_TIME_POINT,)


def _resolve_trend(
    record: BindingRecord, trend: Union[PatternId, TrendKind, str, None]
) -> tuple[Optional[PatternId], Optional[TrendKind]]:
    if trend is None:
        if record.trend is None:
            return (None, None)
        hit = default_lexicon().classify(record.trend)
        return (hit[0], hit[1]) if hit else (None, TrendKind.CHANGE_PATTERN)
    if isinstance(trend, PatternId) or (
        isinstance(trend, str) and trend in PatternId._value2member_map_
    ):
        pid = PatternId(trend)
        return (pid, kind_of(pid))
    return (None, TrendKind(trend))


def overlays_for(
    record: BindingRecord,
    trend: Union[PatternId, TrendKind, str, None] = None,
    table: Optional[DataTable] = None,
    source_index: int = 0,
    id_prefix: str = "",
) -> list[OverlaySpec]:
    """Default overlay specs for one binding record.

    ``trend`` narrows a trend record to its pattern (or at least its kind);
    left unset it is classified through the default lexicon. ``table`` lets
    summary indicators resolve their statistic value.
    """
    start, end = record.row_span
    column = record.data_name
    specs: list[OverlaySpec] = [
        OverlaySpec(
            OverlayKind.HIGHLIGHT, column, start, end, source_index=source_index
        )
    ]
    if record.is_num:
        rows = [start] if start == end else [start, end]
        values = list(record.num)
        while len(values) < len(rows):
            values.append(values[-1])
        for row, value in zip(rows, values):
            text = format_number(value)
            specs.append(
                OverlaySpec(
                    OverlayKind.MARKER, column, row, row, source_index=source_index
                )
            )
            specs.append(
                OverlaySpec(
                    OverlayKind.LABEL, column, row, row,
                    text_content=text, source_index=source_index,
                )
            )
    elif record.is_trend:
        pid, kind = _resolve_trend(record, trend)
        kind = kind or TrendKind.CHANGE_PATTERN
        if kind is TrendKind.CHANGE_PATTERN:
            specs.append(
                OverlaySpec(
                    OverlayKind.TREND_LINE, column, start, end,
                    source_index=source_index,
                )
            )
            specs.append(
                OverlaySpec(
                    OverlayKind.DESCRIPTION, column, start, end,
                    text_content=record.text or record.trend,
                    source_index=source_index,
                )
            )
        elif kind is TrendKind.SUMMARY_INDICATOR:
            statistic = None
            text = record.trend
            if table is not None and table.has_column(column):
                stat_pid = pid or PatternId.MEAN_LEVEL
                value, _rows = summary_statistic(
                    table.column_values(column), stat_pid
                )
                name = _STAT_NAME[stat_pid]
                statistic = (name, value)
                text = f"{name} {format_number(value)}"
            specs.append(
                OverlaySpec(
                    OverlayKind.OVERALL_INDICATOR, column, start, end,
                    text_content=text, statistic=statistic,
                    source_index=source_index,
                )
            )
        else:
            specs.append(
                OverlaySpec(
                    OverlayKind.SPECIAL_TIME_POINT, column, start, start,
                    text_content=record.trend, source_index=source_index,
                )
            )
    out = []
    for i, spec in enumerate(specs):
        out.append(replace(spec, overlay_id=f"{id_prefix}ov{i}" if id_prefix else f"ov{i}"))
    return out


def assign_overlay_ids(specs: list[OverlaySpec], prefix: str = "") -> list[OverlaySpec]:
    return [
        replace(spec, overlay_id=f"{prefix}ov{i}") for i, spec in enumerate(specs)
    ]
