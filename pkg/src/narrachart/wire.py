"""Binding-document wire format and table input readers.

The binding document is a fielded text template: one or more record objects
with the exact keys ``ObjectName``, ``DataName``, ``Position``, ``Trend``,
``Num``, ``Text``, followed by a ``Reason`` string. Generator output in the
wild is sloppy (bare ``Null`` tokens, stray braces, surrounding prose), so the
parser is field-anchored rather than a strict JSON reader.
"""

from __future__ import annotations

import csv
import io
import json
import re
from typing import Any, Optional, Sequence

from .core import (
    BindingRecord,
    BindingResult,
    CellRef,
    ColumnKind,
    ColumnMeta,
    DataTable,
)

RECORD_FIELDS = ("ObjectName", "DataName", "Position", "Trend", "Num", "Text")

_NULLISH = {"none", "null", "nan", ""}


class MalformedResponse(ValueError):
    """Raised when a response cannot be coerced into the binding template."""


# --- serialization -------------------------------------------------------

def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _unesc(s: str) -> str:
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def format_number(v: float) -> str:
    """Render a numeric value without a spurious trailing ``.0``."""
    f = float(v)
    if f.is_integer() and abs(f) < 1e15:
        return str(int(f))
    return repr(f)


def serialize_record(rec: BindingRecord) -> str:
    pos = ", ".join(
        f'[\"{_esc(ref.column)}\", {ref.row}]' for ref in rec.position
    )
    trend = f'"{_esc(rec.trend)}"' if rec.trend is not None else '"None"'
    if rec.num is not None:
        num = "[" + ", ".join(format_number(v) for v in rec.num) + "]"
    else:
        num = "[Null]"
    lines = [
        "{",
        f'    "ObjectName": "{_esc(rec.object_name)}",',
        f'    "DataName": "{_esc(rec.data_name)}",',
        f'    "Position": [{pos}],',
        f'    "Trend": {trend},',
        f'    "Num": {num},',
        f'    "Text": "{_esc(rec.text)}"}}',
    ]
    return "\n".join(lines)

def serialize_binding(result: BindingResult) -> str:
    """Render a BindingResult in the fielded template, Reason last."""
    body = ",\n".join(serialize_record(r) for r in result.records)
    if body.startswith("{"):
        body = "Result:" + body
    return f'{body}\nReason: "{_esc(result.reason)}"'


# --- parsing -------------------------------------------------------------

_STR_FIELD = {
    name: re.compile(r'"%s"\s*[:=]\s*"((?:[^"\\]|\\.)*)"' % name, re.DOTALL)
    for name in ("ObjectName", "DataName", "Text", "Trend")
}
_BARE_NULL = re.compile(r'"(?:Trend|Num)"\s*[:=]\s*(None|Null|null|none)\b')
_PAIR = re.compile(r'\[\s*"((?:[^"\\]|\\.)*)"\s*,\s*(-?\d+)\s*\]')
_NEXT_FIELD = re.compile(r'"(?:ObjectName|DataName|Position|Trend|Num|Text)"\s*[:=]')
_REASON = re.compile(r'"?Reason"?\s*[:=]\s*')


def _field_region(chunk: str, name: str) -> Optional[str]:
    """Return the raw text of a field's value, up to the next known field."""
    m = re.search(r'"%s"\s*[:=]\s*' % name, chunk)
    if not m:
        return None
    rest = chunk[m.end():]
    nxt = _NEXT_FIELD.search(rest)
    return rest[: nxt.start()] if nxt else rest


def _parse_position(chunk: str) -> list[CellRef]:
    region = _field_region(chunk, "Position")
    if region is None:
        raise MalformedResponse("record missing required field 'Position'")
    refs = [CellRef(_unesc(col), int(row)) for col, row in _PAIR.findall(region)]
    if not refs:
        raise MalformedResponse("unparseable position pair")
    return refs


def _parse_num(chunk: str) -> Optional[tuple[float, ...]]:
    region = _field_region(chunk, "Num")
    if region is None:
        return None
    region = region.strip().rstrip(",}").strip()
    if not region:
        return None
    inner = region
    m = re.match(r"\[([^\]]*)\]", region)
    if m:
        inner = m.group(1)
    values = []
    for item in inner.split(","):
        item = item.strip().strip('"')
        if item.lower() in _NULLISH:
            continue
        try:
            values.append(float(item))
        except ValueError:
            continue
    return tuple(values) if values else None


def _parse_trend(chunk: str) -> Optional[str]:
    m = _STR_FIELD["Trend"].search(chunk)
    if m:
        value = _unesc(m.group(1))
        return None if value.strip().lower() in _NULLISH else value
    region = _field_region(chunk, "Trend")
    if region is None:
        return None
    value = region.strip().rstrip(",}").strip().strip('"')
    return None if value.lower() in _NULLISH else value


def _parse_record(chunk: str) -> BindingRecord:
    values: dict[str, str] = {}
    for name in ("ObjectName", "DataName", "Text"):
        m = _STR_FIELD[name].search(chunk)
        if m:
            values[name] = _unesc(m.group(1))
        elif name != "Text":
            raise MalformedResponse(f"record missing required field {name!r}")
    position = _parse_position(chunk)
    if len(position) == 1:
        position = [position[0], position[0]]
    elif len(position) > 2:
        position = [position[0], position[-1]]
    return BindingRecord(
        object_name=values["ObjectName"],
        data_name=values["DataName"],
        position=(position[0], position[1]),
        trend=_parse_trend(chunk),
        num=_parse_num(chunk),
        text=values.get("Text", ""),
    )


def _parse_reason(raw: str, search_from: int) -> str:
    m = _REASON.search(raw, search_from)
    if not m:
        m = _REASON.search(raw)
        if not m:
            return ""
    rest = raw[m.end():]
    qm = re.match(r'"((?:[^"\\]|\\.)*)"', rest, re.DOTALL)
    if qm:
        return _unesc(qm.group(1)).strip()
    return rest.strip()


def parse_binding(raw: str) -> BindingResult:
    """Parse a binding document, tolerating surrounding prose and format slop.

    Raises MalformedResponse when no record can be recovered or a record is
    missing a required field.
    """
    if not raw or not raw.strip():
        raise MalformedResponse("empty response")
    anchors = [m.start() for m in re.finditer(r'"ObjectName"', raw)]
    if not anchors:
        raise MalformedResponse('no "ObjectName" field found')
    reason_m = _REASON.search(raw, anchors[-1])
    records_end = reason_m.start() if reason_m else len(raw)
    records = []
    for i, start in enumerate(anchors):
        end = anchors[i + 1] if i + 1 < len(anchors) else records_end
        records.append(_parse_record(raw[start:end]))
    reason = _parse_reason(raw, anchors[-1])
    return BindingResult(records=tuple(records), reason=reason)


# --- binding result <-> plain JSON objects -------------------------------

def record_to_obj(rec: BindingRecord) -> dict[str, Any]:
    """Record as a JSON-safe mapping using the wire field names."""
    return {
        "ObjectName": rec.object_name,
        "DataName": rec.data_name,
        "Position": [[ref.column, ref.row] for ref in rec.position],
        "Trend": rec.trend if rec.trend is not None else "None",
        "Num": list(rec.num) if rec.num is not None else [None],
        "Text": rec.text,
    }


def record_from_obj(obj: dict[str, Any]) -> BindingRecord:
    refs = [CellRef(str(c), int(r)) for c, r in obj["Position"]]
    if len(refs) == 1:
        refs = [refs[0], refs[0]]
    trend = obj.get("Trend")
    if isinstance(trend, str) and trend.strip().lower() in _NULLISH:
        trend = None
    num = obj.get("Num")
    if num is not None:
        num = tuple(float(v) for v in num if v is not None) or None
    return BindingRecord(
        object_name=obj["ObjectName"],
        data_name=obj["DataName"],
        position=(refs[0], refs[-1]),
        trend=trend,
        num=num,
        text=obj.get("Text", ""),
    )


def result_to_obj(result: BindingResult) -> dict[str, Any]:
    return {
        "Result": [record_to_obj(r) for r in result.records],
        "Reason": result.reason,
    }


def result_from_obj(obj: dict[str, Any]) -> BindingResult:
    return BindingResult(
        records=tuple(record_from_obj(r) for r in obj.get("Result", [])),
        reason=obj.get("Reason", ""),
    )


# --- table input ---------------------------------------------------------

_TEMPORAL_NAMES = {"year", "date", "month", "quarter", "period", "time", "week", "day"}
_YEARISH = re.compile(r"^(19|20)\d{2}(\s*Q[1-4])?$", re.IGNORECASE)


def _coerce_cell(text: str) -> Any:
    s = text.strip()
    if s == "" or s.lower() in {"null", "none", "na", "n/a"}:
        return None
    try:
        return float(s.replace(",", "")) if any(ch.isdigit() for ch in s) else s
    except ValueError:
        return s


def _infer_kind(name: str, values: Sequence[Any]) -> ColumnKind:
    base = name.strip().lower()
    base = re.sub(r"\(.*\)", "", base).strip()
    if base in _TEMPORAL_NAMES or base.split()[-1:] == ["year"]:
        return ColumnKind.TEMPORAL
    non_null = [v for v in values if v is not None]
    if non_null and all(isinstance(v, str) and _YEARISH.match(v) for v in non_null):
        return ColumnKind.TEMPORAL
    if non_null and all(isinstance(v, (int, float)) for v in non_null):
        return ColumnKind.NUMERIC
    return ColumnKind.CATEGORICAL


_UNIT_SUFFIX = re.compile(r"^(?P<base>.*?)\s*\((?P<unit>[^()]+)\)\s*$")


def table_from_csv(text: str, name: str = "table") -> DataTable:
    """Build a table from CSV with a header row.

    A parenthesized header suffix is read as the column unit, e.g.
    ``Revenue (CNY Billion)``. Column kinds are inferred from names and values.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError("empty CSV input")
    header, data = rows[0], rows[1:]
    parsed = [[_coerce_cell(cell) for cell in row] for row in data]
    columns = []
    for j, raw_name in enumerate(header):
        unit = None
        col_name = raw_name.strip()
        m = _UNIT_SUFFIX.match(col_name)
        if m:
            col_name, unit = m.group("base").strip(), m.group("unit").strip()
        values = [row[j] if j < len(row) else None for row in parsed]
        kind = _infer_kind(col_name, values)
        if kind is ColumnKind.TEMPORAL:
            for i, row in enumerate(parsed):
                if j < len(row) and isinstance(row[j], float) and row[j].is_integer():
                    row[j] = str(int(row[j]))
        columns.append(ColumnMeta(col_name, kind, unit))
    return DataTable(name, columns, parsed)


def table_from_obj(obj: dict[str, Any]) -> DataTable:
    """Build a table from the structured form {name, columns, rows}."""
    columns = [
        ColumnMeta(
            c["name"],
            ColumnKind(c.get("kind", "numeric")),
            c.get("unit"),
        )
        for c in obj["columns"]
    ]
    return DataTable(obj.get("name", "table"), columns, obj["rows"])


def table_to_obj(table: DataTable) -> dict[str, Any]:
    return {
        "name": table.name,
        "columns": [
            {"name": c.name, "kind": c.kind.value, "unit": c.unit}
            for c in table.columns
        ],
        "rows": [list(r) for r in table.rows],
    }


def table_digest(table: DataTable) -> str:
    """Compact text rendering of a table with explicit 1-based row numbers."""
    cols = []
    for c in table.columns:
        label = c.name
        if c.unit:
            label += f" ({c.unit})"
        cols.append(f"{label} [{c.kind.value}]")
    lines = [f"Table: {table.name}", "Columns: " + " | ".join(cols)]
    for i, row in enumerate(table.rows, start=1):
        cells = []
        for v in row:
            if v is None:
                cells.append("null")
            elif isinstance(v, float):
                cells.append(format_number(v))
            else:
                cells.append(str(v))
        lines.append(f"Row {i}: " + " | ".join(cells))
    return "\n".join(lines)


_DIGEST_COL = re.compile(
    r"^(?P<name>.*?)(?:\s*\((?P<unit>[^()]*)\))?\s*\[(?P<kind>\w+)\]$"
)


def digest_to_table(digest: str) -> DataTable:
    """Inverse of :func:`table_digest`."""
    name = "table"
    columns: list[ColumnMeta] = []
    rows: list[list[Any]] = []
    for line in digest.splitlines():
        line = line.strip()
        if line.startswith("Table:"):
            name = line[len("Table:"):].strip()
        elif line.startswith("Columns:"):
            for part in line[len("Columns:"):].split("|"):
                m = _DIGEST_COL.match(part.strip())
                if not m:
                    raise ValueError(f"bad column spec in digest: {part!r}")
                columns.append(
                    ColumnMeta(
                        m.group("name").strip(),
                        ColumnKind(m.group("kind")),
                        m.group("unit"),
                    )
                )
        elif re.match(r"^Row \d+:", line):
            body = line.split(":", 1)[1]
            rows.append([_coerce_cell(c) for c in body.split("|")])
    if not columns:
        raise ValueError("digest has no Columns line")
    # keep temporal cells textual, mirroring the CSV reader
    for j, col in enumerate(columns):
        if col.kind is ColumnKind.TEMPORAL:
            for row in rows:
                if j < len(row) and isinstance(row[j], float) and row[j].is_integer():
                    row[j] = str(int(row[j]))
    return DataTable(name, columns, rows)


def load_table(path: str) -> DataTable:
    """Load a table from a .csv or structured .json file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return table_from_obj(json.loads(text))
    import os

    return table_from_csv(text, name=os.path.splitext(os.path.basename(path))[0])
