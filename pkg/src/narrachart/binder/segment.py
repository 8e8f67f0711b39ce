"""Split an article into single-subject narratives.

The deterministic path splits into sentences, detects each sentence's subject
by fuzzy column-name match, merges consecutive sentences sharing a subject and
attaches subject-less sentences to the narrative before them. Narrative texts
tile the article verbatim, so concatenating them in order reconstructs it.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from ..core import DataTable
from .match import rank_subject_columns
from .providers import NullProvider, ProviderError


class EmptyArticle(ValueError):
    pass


@dataclass(frozen=True)
class Narrative:
    id: str
    order: int
    text: str
    subject_hint: Optional[str] = None


_BOUNDARY = re.compile(r"[.!?]+\s+")
_ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "st", "vs", "etc", "e.g", "i.e", "eg",
    "ie", "no", "fig", "inc", "co", "corp", "ltd", "jr", "sr", "u.s", "u.k",
    "approx", "dept", "est",
}


def split_sentence_spans(article: str) -> list[tuple[int, int]]:
    """Character spans of sentences; spans tile the whole article."""
    boundaries = []
    for m in _BOUNDARY.finditer(article):
        before = article[: m.start() + 1]
        word = re.search(r"[\w.]+$", before[:-1] if before.endswith(".") else before)
        prev = (word.group(0).lower().rstrip(".") if word else "")
        if prev in _ABBREVIATIONS:
            continue
        nxt = article[m.end() : m.end() + 1]
        if nxt and nxt.islower():
            continue
        boundaries.append(m.end())
    spans = []
    start = 0
    for b in boundaries:
        if b > start:
            spans.append((start, b))
            start = b
    if start < len(article):
        spans.append((start, len(article)))
    return spans or [(0, len(article))]


def _sentence_subject(text: str, table: DataTable, threshold: float) -> Optional[str]:
    ranked = rank_subject_columns(text, table, threshold)
    return ranked[0].column if ranked else None


def _build_narratives(
    article: str,
    spans: list[tuple[int, int]],
    subjects: list[Optional[str]],
) -> list[Narrative]:
    groups: list[tuple[list[int], Optional[str]]] = []
    pending: list[int] = []
    for i, subj in enumerate(subjects):
        if subj is None:
            if groups:
                groups[-1][0].append(i)
            else:
                pending.append(i)
        elif groups and groups[-1][1] == subj:
            groups[-1][0].append(i)
        else:
            members = pending + [i]
            pending = []
            groups.append((members, subj))
    if pending:
        groups.append((pending, None))
    narratives = []
    for order, (members, subj) in enumerate(groups):
        start = spans[members[0]][0]
        end = spans[members[-1]][1]
        narratives.append(
            Narrative(id=f"n{order}", order=order, text=article[start:end], subject_hint=subj)
        )
    return narratives


def _llm_segments(article: str, table: DataTable, provider) -> Optional[list[str]]:
    from .prompts import build_segmentation_prompt

    prompt = build_segmentation_prompt(article, table)
    try:
        raw = provider.send(prompt)
    except ProviderError:
        return None
    m = re.search(r"\[.*\]", raw, re.DOTALL)
    if not m:
        return None
    try:
        segments = json.loads(m.group(0))
    except json.JSONDecodeError:
        return None
    if not isinstance(segments, list) or not all(isinstance(s, str) for s in segments):
        return None
    if "".join(segments) != article:
        return None
    return segments


def segment_narratives(
    article: str,
    table: DataTable,
    provider=None,
    threshold: float = 0.5,
) -> list[Narrative]:
    """Segment an article into narratives, one per subject run.

    When a provider is given it is asked first; its segmentation is accepted
    only if re-concatenating the segments reconstructs the article verbatim,
    otherwise the deterministic path takes over.
    """
    if not article or not article.strip():
        raise EmptyArticle("article is empty")
    if provider is not None and not isinstance(provider, NullProvider):
        segments = _llm_segments(article, table, provider)
        if segments:
            narratives = []
            for order, seg in enumerate(segments):
                subj = _sentence_subject(seg, table, threshold)
                narratives.append(
                    Narrative(id=f"n{order}", order=order, text=seg, subject_hint=subj)
                )
            return narratives
    spans = split_sentence_spans(article)
    subjects = [
        _sentence_subject(article[s:e], table, threshold) for s, e in spans
    ]
    return _build_narratives(article, spans, subjects)
