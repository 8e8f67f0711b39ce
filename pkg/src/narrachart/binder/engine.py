"""Binding orchestration: prompt the provider, parse, validate, cross-check,
and fall back to the deterministic binder when the model path cannot deliver."""

from __future__ import annotations

from typing import Optional, Sequence

from ..core import BindingResult, DataTable, augment_table, validate_binding
from ..trendlex import (
    DetectorParams,
    Lexicon,
    Span,
    TrendKind,
    default_lexicon,
    verify_span,
)
from ..wire import MalformedResponse, parse_binding
from .fallback import BindingFailed, fallback_bind
from .prompts import build_prompt
from .providers import NullProvider, ProviderError
from .retrieval import PromptExample, RetrievalConfig, select_examples

#: one initial ask plus two re-asks on malformed or invalid responses
MAX_ATTEMPTS = 3


def cross_check_trends(
    result: BindingResult,
    table: DataTable,
    lexicon: Lexicon,
    params: Optional[DetectorParams] = None,
) -> BindingResult:
    """Verify reported trend windows against the detectors.

    A mismatch does not reject the binding; it demotes confidence by
    annotating the reason so reviewers see which spans failed verification.
    """
    tab = augment_table(table, result)
    notes = []
    for rec in result.records:
        if rec.trend is None or not tab.has_column(rec.data_name):
            continue
        hit = lexicon.classify(rec.trend)
        if hit is None or hit[1] is not TrendKind.CHANGE_PATTERN:
            continue
        series = tab.column_values(rec.data_name)
        start, end = rec.row_span
        if not verify_span(series, hit[0], Span(start, end)):
            notes.append(
                f"[check] trend {rec.trend!r} rows {start}-{end} did not verify "
                f"as {hit[0].value} on column {rec.data_name!r}; confidence demoted."
            )
    if not notes:
        return result
    return BindingResult(
        records=result.records, reason=result.reason + "\n" + "\n".join(notes)
    )


def bind(
    narrative,
    table: DataTable,
    provider=None,
    db: Sequence[PromptExample] = (),
    cfg: Optional[RetrievalConfig] = None,
    lexicon: Optional[Lexicon] = None,
    params: Optional[DetectorParams] = None,
) -> BindingResult:
    """Bind one narrative, via the provider when available, always validated.

    Raises BindingFailed only when even the fallback finds no subject.
    """
    cfg = cfg or RetrievalConfig()
    lexicon = lexicon or default_lexicon()
    use_model = provider is not None and not isinstance(provider, NullProvider)
    if use_model:
        examples = select_examples(narrative, list(db), cfg)
        prompt = build_prompt(narrative, table, examples, cfg)
        for _ in range(MAX_ATTEMPTS):
            try:
                raw = provider.send(prompt)
            except ProviderError:
                break
            try:
                result = parse_binding(raw)
            except MalformedResponse:
                continue
            if validate_binding(result, augment_table(table, result)):
                continue
            return cross_check_trends(result, table, lexicon, params)
    return fallback_bind(narrative, table, lexicon, params)
