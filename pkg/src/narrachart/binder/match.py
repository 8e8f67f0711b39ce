"""Fuzzy matching between narrative text and table column names.

Matching is token based: column-name content tokens are lightly stemmed and
searched for inside contiguous text windows; the score is the fraction of
column tokens covered by the best window.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..core import ColumnKind, DataTable

_TOKEN = re.compile(r"[A-Za-z0-9%']+")

STOPWORDS = {
    "the", "a", "an", "of", "in", "on", "for", "to", "and", "or", "by", "at",
    "with", "from", "as", "is", "are", "was", "were", "be", "been", "this",
    "that", "these", "those", "its", "their", "his", "her", "has", "have",
    "had", "will", "would", "per", "s",
}

_SUFFIXES = (
    "ations", "ation", "ating", "ated", "ates", "ate",
    "ings", "ing", "ions", "ion", "ers", "ies", "ed", "es", "s",
)


def stem(token: str) -> str:
    t = token.lower()
    for suffix in _SUFFIXES:
        if t.endswith(suffix) and len(t) - len(suffix) >= 3:
            return t[: -len(suffix)]
    return t


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    @property
    def norm(self) -> str:
        return stem(self.text)


def tokenize(text: str) -> list[Token]:
    return [Token(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def column_content_tokens(name: str) -> list[str]:
    toks = [t.lower() for t in _TOKEN.findall(name)]
    content = [stem(t) for t in toks if t not in STOPWORDS]
    return content or [stem(t) for t in toks]


@dataclass(frozen=True)
class ColumnMatch:
    column: str
    score: float
    char_start: int
    char_end: int

    def span_text(self, text: str) -> str:
        return text[self.char_start : self.char_end]


def match_column(text: str, column_name: str, tokens: Optional[list[Token]] = None) -> Optional[ColumnMatch]:
    """Best contiguous window of ``text`` covering the column's name tokens."""
    targets = column_content_tokens(column_name)
    if not targets:
        return None
    toks = tokens if tokens is not None else tokenize(text)
    if not toks:
        return None
    target_set = set(targets)
    max_window = len(targets) + 3
    best: Optional[tuple[float, int, int, int]] = None  # (-score, width, start) ordering
    n = len(toks)
    for i in range(n):
        if toks[i].norm not in target_set:
            continue
        covered: set[str] = set()
        for j in range(i, min(n, i + max_window)):
            if toks[j].norm in target_set:
                covered.add(toks[j].norm)
            score = len(covered) / len(targets)
            if score == 0:
                continue
            key = (-score, j - i, toks[i].start)
            if best is None or key < best[:3]:
                best = (*key, j)
    if best is None:
        return None
    neg_score, width, start_char, j = best
    i_tok = next(t for t in toks if t.start == start_char)
    return ColumnMatch(
        column=column_name,
        score=-neg_score,
        char_start=start_char,
        char_end=toks[j].end,
    )


def rank_subject_columns(
    text: str, table: DataTable, threshold: float = 0.5
) -> list[ColumnMatch]:
    """Numeric columns whose names match the text, best score first.

    Ties break toward table column order.
    """
    toks = tokenize(text)
    out: list[tuple[float, int, ColumnMatch]] = []
    for idx, col in enumerate(table.columns):
        if col.kind is not ColumnKind.NUMERIC:
            continue
        m = match_column(text, col.name, toks)
        if m is not None and m.score >= threshold:
            out.append((-m.score, idx, m))
    out.sort(key=lambda t: (t[0], t[1]))
    return [m for _, _, m in out]
