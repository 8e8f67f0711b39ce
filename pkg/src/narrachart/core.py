"""Core domain types shared across the pipeline, plus table and binding validation.

All types are immutable value objects; validation functions are pure and return
violation lists instead of raising, so callers can report every problem at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

Cell = Union[int, float, str, None]

#: joiner used to name a derived column built from two source columns
DERIVED_JOINER = " + "


class ColumnKind(str, Enum):
    NUMERIC = "numeric"
    TEMPORAL = "temporal"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class ColumnMeta:
    """One table column: name, value kind and optional unit (e.g. "CNY Billion")."""

    name: str
    kind: ColumnKind = ColumnKind.NUMERIC
    unit: Optional[str] = None


@dataclass(frozen=True)
class DataTable:
    """Rectangular typed table; the ground against which all positions resolve."""

    name: str
    columns: tuple[ColumnMeta, ...]
    rows: tuple[tuple[Cell, ...], ...]

    def __init__(self, name: str, columns: Iterable, rows: Iterable[Iterable[Cell]]):
        cols = tuple(
            c if isinstance(c, ColumnMeta) else ColumnMeta(str(c)) for c in columns
        )
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(name)

    def column(self, name: str) -> ColumnMeta:
        return self.columns[self.column_index(name)]

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def column_values(self, name: str) -> list[Cell]:
        idx = self.column_index(name)
        return [row[idx] if idx < len(row) else None for row in self.rows]

    def cell(self, column: str, row: int) -> Cell:
        """Cell at 1-based row index."""
        return self.rows[row - 1][self.column_index(column)]

    def numeric_columns(self) -> list[ColumnMeta]:
        return [c for c in self.columns if c.kind is ColumnKind.NUMERIC]

    def with_derived_sum(self, parts: Sequence[str]) -> "DataTable":
        """Append a derived column that is the row-wise sum of ``parts``.

        The derived column is named by concatenating the part names; a row sums
        to null when any constituent cell is null.
        """
        name = DERIVED_JOINER.join(parts)
        if self.has_column(name):
            return self
        idxs = [self.column_index(p) for p in parts]
        unit = self.columns[idxs[0]].unit
        new_rows = []
        for row in self.rows:
            vals = [row[i] for i in idxs]
            if any(not isinstance(v, (int, float)) or isinstance(v, bool) for v in vals):
                total: Cell = None
            else:
                total = sum(float(v) for v in vals)
            new_rows.append(tuple(row) + (total,))
        cols = self.columns + (ColumnMeta(name, ColumnKind.NUMERIC, unit),)
        return DataTable(self.name, cols, new_rows)


def derived_parts(column_name: str, table: DataTable) -> Optional[list[str]]:
    """Split a derived-column name back into existing source columns, if it is one."""
    if DERIVED_JOINER not in column_name:
        return None
    parts = column_name.split(DERIVED_JOINER)
    if len(parts) >= 2 and all(table.has_column(p) for p in parts):
        return parts
    return None


@dataclass(frozen=True)
class CellRef:
    """Reference to one cell: column name plus 1-based row index."""

    column: str
    row: int


@dataclass(frozen=True)
class BindingRecord:
    """One (subject, trend-or-number) claim bound to table positions.

    ``trend`` and ``num`` are mutually exclusive; a record carrying neither is a
    subject-only binding (the narrative names an entity without a trend or value).
    """

    object_name: str
    data_name: str
    position: tuple[CellRef, CellRef]
    trend: Optional[str] = None
    num: Optional[tuple[float, ...]] = None
    text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(self.position))
        if self.num is not None:
            object.__setattr__(self, "num", tuple(float(v) for v in self.num))

    @property
    def is_trend(self) -> bool:
        return self.trend is not None

    @property
    def is_num(self) -> bool:
        return self.num is not None

    @property
    def row_span(self) -> tuple[int, int]:
        return (self.position[0].row, self.position[1].row)


@dataclass(frozen=True)
class BindingResult:
    """A set of binding records plus the reasoning that produced them."""

    records: tuple[BindingRecord, ...]
    reason: str = ""

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))


class VocabKind(str, Enum):
    SUBJECT = "subject"
    TREND = "trend"
    NUMERICAL = "numerical"


@dataclass(frozen=True)
class VocabSpan:
    """A classified vocabulary occurrence in the narrative text."""

    kind: VocabKind
    text: str
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Metrics:
    """Precision / recall / F1 with their underlying counts."""

    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "Metrics":
        p = tp / (tp + fp) if tp + fp > 0 else 0.0
        r = tp / (tp + fn) if tp + fn > 0 else 0.0
        # count form of 2PR/(P+R); exact when the harmonic mean is rational
        denom = 2 * tp + fp + fn
        f1 = 2 * tp / denom if denom > 0 else 0.0
        return cls(tp=tp, fp=fp, fn=fn, precision=p, recall=r, f1=f1)


def _is_number(v: Cell) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def validate_table(table: DataTable) -> list[str]:
    """Check DataTable invariants; returns one message per violation."""
    violations: list[str] = []
    if not table.columns:
        violations.append("table has no columns")
    if not table.rows:
        violations.append("table has no rows")
    seen: set[str] = set()
    for col in table.columns:
        if not col.name:
            violations.append("column with empty name")
        elif col.name in seen:
            violations.append(f"duplicate column name {col.name!r}")
        seen.add(col.name)
    ncols = len(table.columns)
    for i, row in enumerate(table.rows, start=1):
        if len(row) != ncols:
            violations.append(f"row {i}: expected {ncols} cells, got {len(row)}")
    for j, col in enumerate(table.columns):
        if col.kind is not ColumnKind.NUMERIC:
            continue
        for i, row in enumerate(table.rows, start=1):
            if j < len(row) and row[j] is not None and not _is_number(row[j]):
                violations.append(
                    f"column {col.name!r} row {i}: non-numeric value {row[j]!r}"
                )
    return violations


def validate_binding(result: BindingResult, table: DataTable) -> list[str]:
    """Check every record of a binding result against a table.

    Total over malformed-but-parseable documents: never raises. Records naming
    a derived combined column are validated against the augmented table.
    """
    violations: list[str] = []

    def add(msg: str) -> None:
        if msg not in violations:
            violations.append(msg)

    for k, rec in enumerate(result.records, start=1):
        where = f"record {k} ({rec.object_name!r})"
        tab = table
        if not tab.has_column(rec.data_name):
            parts = derived_parts(rec.data_name, table)
            if parts:
                tab = table.with_derived_sum(parts)
            else:
                add(f"{where}: unknown column {rec.data_name!r}")
                continue
        if rec.is_trend and rec.is_num:
            add(f"{where}: both Trend and Num populated")
        if len(rec.position) != 2:
            add(f"{where}: expected 2 position refs, got {len(rec.position)}")
            continue
        for ref in rec.position:
            if ref.column != rec.data_name:
                add(
                    f"{where}: position column {ref.column!r} != DataName {rec.data_name!r}"
                )
            if not 1 <= ref.row <= tab.row_count:
                add(f"{where}: row {ref.row} out of range 1..{tab.row_count}")
        if rec.position[0].row > rec.position[1].row:
            add(
                f"{where}: start row {rec.position[0].row} after end row {rec.position[1].row}"
            )
    return violations


def augment_table(table: DataTable, result: BindingResult) -> DataTable:
    """Materialize any derived combined columns a binding result refers to."""
    out = table
    for rec in result.records:
        if not out.has_column(rec.data_name):
            parts = derived_parts(rec.data_name, table)
            if parts:
                out = out.with_derived_sum(parts)
    return out
