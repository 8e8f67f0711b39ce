"""Deterministic, network-free binder.

Rules, in order:

1. The subject is the numeric column whose name tokens best overlap a text
   window (threshold 0.5). Two-plus matching columns joined by a combining cue
   ("both", "together", "the mix of", ...) form a derived sum column.
2. Every number in the text is matched to equal cells, subject column first,
   with magnitude words (trillion/billion/million), percents and basis points
   normalized against the column unit. Numbers matching no cell are dropped
   with a note; four-digit values that hit a temporal column act as row
   constraints instead of claims.
3. Trend phrases found through the lexicon become trend records; change
   patterns are located by the detectors on the subject series, summary
   indicators by the summary statistics, and special events by timestamp rows.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

from ..core import (
    BindingRecord,
    BindingResult,
    CellRef,
    ColumnKind,
    ColumnMeta,
    DataTable,
    VocabKind,
    VocabSpan,
)
from ..trendlex import (
    DetectorParams,
    Lexicon,
    Mention,
    PatternId,
    SeriesTooShort,
    TrendKind,
    default_lexicon,
    detect_pattern,
    summary_statistic,
)
from ..wire import format_number
from .match import ColumnMatch, rank_subject_columns
from .segment import Narrative


class BindingFailed(ValueError):
    """The narrative offers no bindable subject and no matchable number."""


_MAGNITUDE = {
    "trillion": 1e12, "tn": 1e12,
    "billion": 1e9, "bn": 1e9,
    "million": 1e6, "mn": 1e6,
    "thousand": 1e3,
}

_NUMBER = re.compile(
    r"(?<![\w.])"
    r"(?P<num>\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?)"
    r"(?:\s*(?P<unit>trillion|billion|million|thousand|tn|bn|mn|percent|basis points|bps|%))?"
    r"(?!\w)",
    re.IGNORECASE,
)

_WORD_NUMBERS = {
    "two": 2, "three": 3, "four": 4, "five": 5, "six": 6, "seven": 7,
    "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
    "thirteen": 13, "fourteen": 14, "fifteen": 15, "sixteen": 16,
    "seventeen": 17, "eighteen": 18, "nineteen": 19, "twenty": 20,
}
_WORD_NUMBER = re.compile(r"\b(%s)\b" % "|".join(_WORD_NUMBERS), re.IGNORECASE)

_COMBINE_CUE = re.compile(
    r"\b(both|together|combined|combination|mix|sum|total|plus)\b", re.IGNORECASE
)


@dataclass(frozen=True)
class NumberMention:
    value: float
    surface: str
    char_start: int
    char_end: int
    magnitude: Optional[float] = None
    is_percent: bool = False
    is_bps: bool = False

    @property
    def looks_like_year(self) -> bool:
        return (
            self.magnitude is None
            and not self.is_percent
            and not self.is_bps
            and float(self.value).is_integer()
            and 1900 <= self.value <= 2100
            and len(self.surface.strip()) == 4
        )


def extract_number_mentions(text: str) -> list[NumberMention]:
    mentions = []
    for m in _NUMBER.finditer(text):
        raw = float(m.group("num").replace(",", ""))
        unit = (m.group("unit") or "").lower()
        mentions.append(
            NumberMention(
                value=raw,
                surface=m.group(0).strip(),
                char_start=m.start(),
                char_end=m.start() + len(m.group(0).rstrip()),
                magnitude=_MAGNITUDE.get(unit),
                is_percent=unit in ("%", "percent"),
                is_bps=unit in ("bps", "basis points"),
            )
        )
    for m in _WORD_NUMBER.finditer(text):
        mentions.append(
            NumberMention(
                value=float(_WORD_NUMBERS[m.group(0).lower()]),
                surface=m.group(0),
                char_start=m.start(),
                char_end=m.end(),
            )
        )
    mentions.sort(key=lambda n: n.char_start)
    return mentions


def _column_magnitude(column: ColumnMeta) -> Optional[float]:
    unit = (column.unit or "").lower()
    for word, factor in _MAGNITUDE.items():
        if re.search(rf"\b{word}\b", unit):
            return factor
    return None


def _column_is_percent(column: ColumnMeta) -> bool:
    unit = (column.unit or "").lower()
    return "%" in unit or "percent" in unit


def cell_candidates(mention: NumberMention, column: ColumnMeta) -> list[float]:
    """Values the mention could take in this column, preferred first."""
    out: list[float] = []
    if mention.magnitude is not None:
        absolute = mention.value * mention.magnitude
        col_factor = _column_magnitude(column)
        out.append(absolute / col_factor if col_factor else absolute)
    if mention.is_bps:
        out.append(mention.value * 0.01)
    out.append(mention.value)
    if mention.is_percent and not _column_is_percent(column):
        out.append(mention.value / 100.0)
    seen = []
    for v in out:
        if not any(math.isclose(v, s, rel_tol=1e-9, abs_tol=1e-12) for s in seen):
            seen.append(v)
    return seen


def _match_cell(
    mention: NumberMention,
    table: DataTable,
    columns: list[str],
    preferred_rows: list[int],
) -> Optional[tuple[str, int, float]]:
    for name in columns:
        col = table.column(name)
        values = table.column_values(name)
        candidates = cell_candidates(mention, col)
        row_order = preferred_rows + [
            r for r in range(1, table.row_count + 1) if r not in preferred_rows
        ]
        for row in row_order:
            cell = values[row - 1]
            if not isinstance(cell, (int, float)) or isinstance(cell, bool):
                continue
            for cand in candidates:
                if math.isclose(float(cell), cand, rel_tol=1e-9, abs_tol=1e-12):
                    return (name, row, float(cell))
    return None


def _year_rows(year: int, table: DataTable) -> list[int]:
    rows = []
    token = str(year)
    for col in table.columns:
        if col.kind is not ColumnKind.TEMPORAL:
            continue
        for i, cell in enumerate(table.column_values(col.name), start=1):
            if cell is not None and token in str(cell) and i not in rows:
                rows.append(i)
    return rows


@dataclass(frozen=True)
class SubjectMatch:
    data_name: str
    text: str
    char_start: int
    char_end: int
    score: float
    parts: Optional[tuple[str, ...]] = None  # set for combined subjects


@dataclass(frozen=True)
class NumberBinding:
    mention: NumberMention
    column: str
    row: int
    cell_value: float

    @property
    def converted(self) -> bool:
        return not math.isclose(self.mention.value, self.cell_value, rel_tol=1e-9)


@dataclass(frozen=True)
class TrendBinding:
    mention: Mention
    pattern_id: PatternId
    kind: TrendKind
    column: str
    start_row: int
    end_row: int
    note: str = ""


@dataclass
class FallbackAnalysis:
    table: DataTable  # augmented with derived columns when combined
    subject: Optional[SubjectMatch] = None
    numbers: list[NumberBinding] = field(default_factory=list)
    dropped_numbers: list[NumberMention] = field(default_factory=list)
    trends: list[TrendBinding] = field(default_factory=list)
    skipped_trends: list[Mention] = field(default_factory=list)
    year_constraints: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def vocab_spans(self, text: str) -> list[VocabSpan]:
        spans = []
        if self.subject is not None:
            spans.append(
                VocabSpan(
                    VocabKind.SUBJECT,
                    text[self.subject.char_start : self.subject.char_end],
                    self.subject.char_start,
                    self.subject.char_end,
                )
            )
        for tb in self.trends:
            m = tb.mention
            spans.append(VocabSpan(VocabKind.TREND, m.text, m.char_start, m.char_end))
        for nb in self.numbers:
            m = nb.mention
            spans.append(
                VocabSpan(VocabKind.NUMERICAL, m.surface, m.char_start, m.char_end)
            )
        spans.sort(key=lambda s: s.char_start)
        return spans


def _pick_subject(
    text: str, table: DataTable, threshold: float
) -> tuple[Optional[SubjectMatch], DataTable]:
    ranked = rank_subject_columns(text, table, threshold)
    if not ranked:
        return None, table
    if len(ranked) >= 2 and _COMBINE_CUE.search(text):
        disjoint: list[ColumnMatch] = []
        for m in ranked[:3]:
            if all(
                m.char_end <= o.char_start or o.char_end <= m.char_start
                for o in disjoint
            ):
                disjoint.append(m)
        if len(disjoint) >= 2:
            in_text_order = sorted(disjoint, key=lambda m: m.char_start)
            parts = tuple(m.column for m in in_text_order)
            augmented = table.with_derived_sum(list(parts))
            derived = augmented.column_names[-1]
            start = min(m.char_start for m in in_text_order)
            end = max(m.char_end for m in in_text_order)
            score = sum(m.score for m in in_text_order) / len(in_text_order)
            return (
                SubjectMatch(derived, text[start:end], start, end, score, parts),
                augmented,
            )
    best = ranked[0]
    return (
        SubjectMatch(best.column, best.span_text(text), best.char_start, best.char_end, best.score),
        table,
    )


def analyze(
    text: str,
    table: DataTable,
    lexicon: Optional[Lexicon] = None,
    params: Optional[DetectorParams] = None,
    threshold: float = 0.5,
) -> FallbackAnalysis:
    """Ground every rule the fallback binder fires, with notes."""
    lexicon = lexicon or default_lexicon()
    params = params or DetectorParams()
    subject, working = _pick_subject(text, table, threshold)
    a = FallbackAnalysis(table=working, subject=subject)
    if subject is None:
        a.notes.append("No column name matched a subject span above threshold.")
    elif subject.parts:
        a.notes.append(
            f"Combined subject {subject.text!r} spans columns "
            f"{', '.join(repr(p) for p in subject.parts)}; derived column "
            f"{subject.data_name!r} holds their row-wise sum."
        )
    else:
        a.notes.append(
            f"Matched subject {subject.text!r} to column {subject.data_name!r} "
            f"(token overlap {subject.score:.2f})."
        )

    mentions = extract_number_mentions(text)
    for m in mentions:
        if m.looks_like_year:
            rows = _year_rows(int(m.value), working)
            if rows:
                a.year_constraints.extend(r for r in rows if r not in a.year_constraints)
                a.notes.append(
                    f"Read {m.surface} as a timestamp (row {rows[0]})."
                )
                continue
        search: list[str] = []
        if subject is not None:
            search.append(subject.data_name)
        search.extend(
            c.name for c in working.numeric_columns() if c.name not in search
        )
        hit = _match_cell(m, working, search, a.year_constraints)
        if hit is None:
            a.dropped_numbers.append(m)
            a.notes.append(
                f"Dropped number {m.surface!r}: no matching cell in the table."
            )
            continue
        column, row, cell = hit
        nb = NumberBinding(m, column, row, cell)
        a.numbers.append(nb)
        note = f"Bound number {m.surface!r} to column {column!r} row {row}."
        if nb.converted:
            note += f" Unit conversion: {m.surface} = {format_number(cell)} in column units."
        a.notes.append(note)

    series_col = subject.data_name if subject is not None else None
    series = working.column_values(series_col) if series_col else None
    occurrence: dict[PatternId, int] = {}
    for mention in lexicon.find_mentions(text):
        idx = occurrence.get(mention.pattern_id, 0)
        occurrence[mention.pattern_id] = idx + 1
        if series_col is None:
            a.skipped_trends.append(mention)
            a.notes.append(
                f"Skipped trend {mention.text!r}: no subject series to locate it in."
            )
            continue
        if mention.kind is TrendKind.CHANGE_PATTERN:
            try:
                spans = detect_pattern(series, mention.pattern_id, params)
            except SeriesTooShort:
                spans = []
            note = ""
            if spans:
                span = spans[idx] if idx < len(spans) else spans[0]
            else:
                non_null = [
                    i for i, v in enumerate(series, start=1)
                    if isinstance(v, (int, float)) and not isinstance(v, bool)
                ]
                span = None
                if non_null:
                    from ..trendlex import Span as _Span

                    span = _Span(non_null[0], non_null[-1], 0.0)
                    note = "no matching window; defaulted to the full series"
            if span is None:
                a.skipped_trends.append(mention)
                a.notes.append(f"Skipped trend {mention.text!r}: series is empty.")
                continue
            a.trends.append(
                TrendBinding(
                    mention, mention.pattern_id, mention.kind,
                    series_col, span.start_row, span.end_row, note,
                )
            )
            suffix = f" ({note})" if note else ""
            a.notes.append(
                f"Bound trend {mention.text!r} ({mention.pattern_id.value}) to "
                f"column {series_col!r} rows {span.start_row}-{span.end_row}.{suffix}"
            )
        elif mention.kind is TrendKind.SUMMARY_INDICATOR:
            try:
                value, rows = summary_statistic(series, mention.pattern_id)
            except Exception:
                a.skipped_trends.append(mention)
                continue
            if rows:
                start_row, end_row = rows[0], rows[-1]
            else:
                non_null = [
                    i for i, v in enumerate(series, start=1)
                    if isinstance(v, (int, float)) and not isinstance(v, bool)
                ]
                start_row, end_row = non_null[0], non_null[-1]
            a.trends.append(
                TrendBinding(
                    mention, mention.pattern_id, mention.kind,
                    series_col, start_row, end_row,
                )
            )
            a.notes.append(
                f"Bound summary {mention.text!r} ({mention.pattern_id.value}="
                f"{format_number(value)}) to column {series_col!r} rows {start_row}-{end_row}."
            )
        else:  # special event: needs a timestamp row
            if a.year_constraints:
                row = a.year_constraints[0]
                a.trends.append(
                    TrendBinding(
                        mention, mention.pattern_id, mention.kind,
                        series_col, row, row,
                    )
                )
                a.notes.append(
                    f"Bound event {mention.text!r} to row {row} via its timestamp."
                )
            else:
                a.skipped_trends.append(mention)
                a.notes.append(
                    f"Skipped event {mention.text!r}: no timestamp match in the table."
                )
    return a


def _full_span(table: DataTable, column: str) -> tuple[int, int]:
    values = table.column_values(column)
    non_null = [
        i for i, v in enumerate(values, start=1)
        if isinstance(v, (int, float)) and not isinstance(v, bool)
    ]
    if non_null:
        return (non_null[0], non_null[-1])
    return (1, table.row_count)


def fallback_bind(
    narrative,
    table: DataTable,
    lexicon: Optional[Lexicon] = None,
    params: Optional[DetectorParams] = None,
    threshold: float = 0.5,
) -> BindingResult:
    """Bind a narrative without a model. Raises BindingFailed when neither a
    subject nor any number can be grounded."""
    from .segment import split_sentence_spans

    text = getattr(narrative, "text", narrative)
    a = analyze(text, table, lexicon, params, threshold)
    subject_name = a.subject.text if a.subject is not None else None
    sentences = split_sentence_spans(text)

    def fragment(char_pos: int) -> str:
        for s, e in sentences:
            if s <= char_pos < e:
                return text[s:e].strip()
        return text.strip()

    records: list[tuple[int, BindingRecord]] = []

    for nb in a.numbers:
        object_name = subject_name or nb.column
        records.append(
            (
                nb.mention.char_start,
                BindingRecord(
                    object_name=object_name,
                    data_name=nb.column,
                    position=(CellRef(nb.column, nb.row), CellRef(nb.column, nb.row)),
                    num=(nb.cell_value,),
                    text=fragment(nb.mention.char_start),
                ),
            )
        )
    for tb in a.trends:
        records.append(
            (
                tb.mention.char_start,
                BindingRecord(
                    object_name=subject_name or tb.column,
                    data_name=tb.column,
                    position=(
                        CellRef(tb.column, tb.start_row),
                        CellRef(tb.column, tb.end_row),
                    ),
                    trend=tb.mention.text,
                    text=fragment(tb.mention.char_start),
                ),
            )
        )
    if not records:
        if a.subject is None:
            raise BindingFailed(
                "no subject column above threshold and no number matched a cell"
            )
        start, end = _full_span(a.table, a.subject.data_name)
        records.append(
            (
                a.subject.char_start,
                BindingRecord(
                    object_name=a.subject.text,
                    data_name=a.subject.data_name,
                    position=(
                        CellRef(a.subject.data_name, start),
                        CellRef(a.subject.data_name, end),
                    ),
                    text=fragment(a.subject.char_start),
                ),
            )
        )
        a.notes.append("No trend or number found; bound the subject alone.")
    records.sort(key=lambda pair: pair[0])
    return BindingResult(
        records=tuple(rec for _, rec in records),
        reason="\n".join(a.notes),
    )
