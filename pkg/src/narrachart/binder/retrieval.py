"""Few-shot example store and similarity retrieval for dynamic prompts.

Similarity is cosine over TF-IDF unigrams+bigrams fit on the example texts;
the selection returns the top-k examples ordered ascending by similarity so
the most relevant example sits last in the prompt.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

_WORD = re.compile(r"[a-z0-9%.]+")


class PromptDbError(ValueError):
    pass


@dataclass
class PromptExample:
    id: str
    input_text: str
    table_digest: str
    expected_output: str
    reasoning: str = ""
    feature_vector: Optional[dict[str, float]] = None

    def validate(self) -> None:
        """Check that the expected output conforms against its own table."""
        from ..core import validate_binding
        from ..wire import digest_to_table, parse_binding

        table = digest_to_table(self.table_digest)
        result = parse_binding(self.expected_output)
        violations = validate_binding(result, table)
        if violations:
            raise PromptDbError(
                f"example {self.id!r} output does not validate: {violations}"
            )


@dataclass(frozen=True)
class RetrievalConfig:
    k: int = 10
    similarity: str = "cosine_tfidf"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.similarity != "cosine_tfidf":
            raise ValueError(f"unknown similarity {self.similarity!r}")


def _terms(text: str) -> list[str]:
    words = _WORD.findall(text.lower())
    bigrams = [f"{a} {b}" for a, b in zip(words, words[1:])]
    return words + bigrams


class TfidfIndex:
    """Unigram+bigram TF-IDF with smoothed IDF and L2-normalized vectors."""

    def __init__(self, texts: Sequence[str]):
        self.n_docs = len(texts)
        df: dict[str, int] = {}
        for text in texts:
            for term in set(_terms(text)):
                df[term] = df.get(term, 0) + 1
        self._df = df

    def idf(self, term: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self._df.get(term, 0))) + 1.0

    def vector(self, text: str) -> dict[str, float]:
        counts: dict[str, int] = {}
        for term in _terms(text):
            counts[term] = counts.get(term, 0) + 1
        vec = {t: c * self.idf(t) for t, c in counts.items()}
        norm = math.sqrt(sum(w * w for w in vec.values()))
        if norm > 0:
            vec = {t: w / norm for t, w in vec.items()}
        return vec

    @staticmethod
    def cosine(a: dict[str, float], b: dict[str, float]) -> float:
        if len(b) < len(a):
            a, b = b, a
        return sum(w * b.get(t, 0.0) for t, w in a.items())


def select_examples(
    narrative, db: Sequence[PromptExample], cfg: Optional[RetrievalConfig] = None
) -> list[PromptExample]:
    """The min(k, |db|) most similar examples, most relevant last."""
    cfg = cfg or RetrievalConfig()
    examples = list(db)
    if not examples:
        return []
    text = getattr(narrative, "text", narrative)
    index = TfidfIndex([ex.input_text for ex in examples])
    for ex in examples:
        ex.feature_vector = index.vector(ex.input_text)
    query = index.vector(text)
    sims = [TfidfIndex.cosine(query, ex.feature_vector) for ex in examples]
    ranked = sorted(range(len(examples)), key=lambda i: (-sims[i], i))[: cfg.k]
    return [examples[i] for i in reversed(ranked)]


def similarity_of(narrative, example: PromptExample, db: Sequence[PromptExample]) -> float:
    index = TfidfIndex([ex.input_text for ex in db])
    text = getattr(narrative, "text", narrative)
    return TfidfIndex.cosine(index.vector(text), index.vector(example.input_text))


# --- prompt DB file (line-delimited JSON) ---------------------------------

def _example_from_obj(obj: dict) -> PromptExample:
    return PromptExample(
        id=str(obj["id"]),
        input_text=obj["input_text"],
        table_digest=obj["table_digest"],
        expected_output=obj["expected_output"],
        reasoning=obj.get("reasoning", ""),
    )


def _example_to_obj(ex: PromptExample) -> dict:
    return {
        "id": ex.id,
        "input_text": ex.input_text,
        "table_digest": ex.table_digest,
        "expected_output": ex.expected_output,
        "reasoning": ex.reasoning,
    }


def load_prompt_db(path: str, validate: bool = True) -> list[PromptExample]:
    examples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                ex = _example_from_obj(json.loads(line))
            except (json.JSONDecodeError, KeyError) as exc:
                raise PromptDbError(f"{path}:{lineno}: bad example record: {exc}")
            if validate:
                ex.validate()
            examples.append(ex)
    return examples


def append_prompt_db(path: str, examples: Iterable[PromptExample]) -> int:
    count = 0
    with open(path, "a", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(_example_to_obj(ex), ensure_ascii=False) + "\n")
            count += 1
    return count
