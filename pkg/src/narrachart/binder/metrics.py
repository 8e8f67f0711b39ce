"""Span-labeling evaluation: per-kind precision, recall and F1.

A prediction is a true positive when it agrees with a gold label on
(kind, normalized text); texts normalize case, hyphens, whitespace and
numeric formatting ("669" == "669.0" == "669%").
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from ..core import BindingRecord, BindingResult, DataTable, Metrics, VocabKind, VocabSpan
from ..wire import format_number, table_from_obj

KINDS = (VocabKind.SUBJECT.value, VocabKind.TREND.value, VocabKind.NUMERICAL.value)

Label = tuple[str, str]


def normalize_label_text(text: str) -> str:
    s = re.sub(r"[\s\-_]+", " ", str(text).strip().lower())
    s = s.strip(" .,;:!?\"'()")
    numeric = s.rstrip("%").replace(",", "")
    try:
        return format_number(float(numeric))
    except ValueError:
        return s


def label_of(kind, text) -> Label:
    kind = kind.value if isinstance(kind, VocabKind) else str(kind)
    return (kind, normalize_label_text(text))


def labels_from_spans(spans: Iterable[VocabSpan]) -> set[Label]:
    return {label_of(s.kind, s.text) for s in spans}


def labels_from_result(result: BindingResult) -> set[Label]:
    labels: set[Label] = set()
    for rec in result.records:
        if rec.object_name:
            labels.add(label_of(VocabKind.SUBJECT, rec.object_name))
        if rec.trend is not None:
            labels.add(label_of(VocabKind.TREND, rec.trend))
        for v in rec.num or ():
            labels.add(label_of(VocabKind.NUMERICAL, format_number(v)))
    return labels


def coerce_labels(value) -> set[Label]:
    """Accept VocabSpans, BindingRecords/Results, (kind, text) pairs or dicts."""
    if isinstance(value, BindingResult):
        return labels_from_result(value)
    labels: set[Label] = set()
    for item in value:
        if isinstance(item, VocabSpan):
            labels.add(label_of(item.kind, item.text))
        elif isinstance(item, BindingRecord):
            labels |= labels_from_result(BindingResult((item,), ""))
        elif isinstance(item, dict):
            labels.add(label_of(item["kind"], item["text"]))
        else:
            kind, text = item
            labels.add(label_of(kind, text))
    return labels


def evaluate(
    predicted: Mapping[str, object], gold: Mapping[str, object]
) -> dict[str, Metrics]:
    """Per-kind metrics over narratives keyed identically in both mappings."""
    counts = {kind: [0, 0, 0] for kind in KINDS}  # tp, fp, fn
    for nid in gold:
        gold_labels = coerce_labels(gold[nid])
        pred_labels = coerce_labels(predicted.get(nid, ()))
        for kind in KINDS:
            g = {t for k, t in gold_labels if k == kind}
            p = {t for k, t in pred_labels if k == kind}
            counts[kind][0] += len(p & g)
            counts[kind][1] += len(p - g)
            counts[kind][2] += len(g - p)
    return {
        kind: Metrics.from_counts(tp, fp, fn)
        for kind, (tp, fp, fn) in counts.items()
    }


def format_report(metrics: Mapping[str, Metrics]) -> str:
    lines = [f"{'kind':<10} {'P':>8} {'R':>8} {'F1':>8} {'TP':>5} {'FP':>5} {'FN':>5}"]
    for kind, m in metrics.items():
        lines.append(
            f"{kind:<10} {m.precision:>8.4f} {m.recall:>8.4f} {m.f1:>8.4f} "
            f"{m.tp:>5} {m.fp:>5} {m.fn:>5}"
        )
    return "\n".join(lines)


def report_to_obj(metrics: Mapping[str, Metrics]) -> dict:
    return {
        kind: {
            "tp": m.tp, "fp": m.fp, "fn": m.fn,
            "precision": round(m.precision, 6),
            "recall": round(m.recall, 6),
            "f1": round(m.f1, 6),
        }
        for kind, m in metrics.items()
    }


# --- gold corpus ----------------------------------------------------------

@dataclass
class GoldNarrative:
    id: str
    text: str
    labels: list[dict]
    table: Optional[DataTable] = None
    table_ref: Optional[str] = None


def load_gold_corpus(path: str) -> list[GoldNarrative]:
    """Load a gold corpus: one JSON object per line, per-narrative labels.

    Each line holds {id, text, gold: [{kind, text}, ...]} plus either an
    inline ``table`` object or a ``table_ref`` naming a previous entry's id.
    """
    narratives: list[GoldNarrative] = []
    tables: dict[str, DataTable] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                entry = GoldNarrative(
                    id=str(obj["id"]),
                    text=obj["text"],
                    labels=list(obj["gold"]),
                    table_ref=obj.get("table_ref"),
                )
                if "table" in obj:
                    entry.table = table_from_obj(obj["table"])
                    tables[entry.id] = entry.table
                elif entry.table_ref:
                    entry.table = tables[entry.table_ref]
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad gold record: {exc}")
            narratives.append(entry)
    return narratives
