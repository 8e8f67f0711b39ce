"""Prompt construction: output-constrained template, reasoning demand and
dynamically selected few-shot examples, assembled into a deterministic
sequence (byte-identical for identical inputs)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..core import DataTable
from ..wire import RECORD_FIELDS, table_digest
from .retrieval import PromptExample, RetrievalConfig

SYSTEM_INSTRUCTION = (
    "You are a financial data analyst. You bind the vocabulary of a financial "
    "narrative (subjects, trends, numerical values) to the cells of a data "
    "table and answer strictly in the requested record template."
)

OUTPUT_TEMPLATE = """Fill in this template, one record object per claim in the input text:
Result:{
    "ObjectName": "<subject as written in the text>",
    "DataName": "<the table column the subject maps to>",
    "Position": [["<column>", <start row>], ["<column>", <end row>]],
    "Trend": "<trend phrase or None>",
    "Num": [<numeric value or Null>],
    "Text": "<verbatim text fragment the record covers>"}
Rules: 'Trend' and 'Num' are mutually exclusive and must not carry values simultaneously;
write "None" for an absent Trend and [Null] for an absent Num. 'Position' holds
["column", row] pairs with 1-based rows: the starting and ending rows of a trend,
or the row of a numerical value (repeat it for a point reference)."""

REASONING_INSTRUCTION = """After the records, add one line starting with Reason: followed by a quoted
explanation that names each object in the text, the table column it corresponds
to, and the rows you chose, for example:
Reason: "There is one object in text and data table: '...', which corresponds to '...' column in the table. ..." """


@dataclass(frozen=True)
class PromptSequence:
    system_instruction: str
    examples: tuple[PromptExample, ...]
    task_table: str
    task_text: str
    output_template: str
    reasoning_instruction: str

    def render_body(self) -> str:
        """The user-facing prompt body (everything except the system text)."""
        parts = []
        if self.examples:
            parts.append("Worked examples, least relevant first:")
            for i, ex in enumerate(self.examples, start=1):
                parts.append(
                    f"### Example {i}\n"
                    f"Input table:\n{ex.table_digest}\n"
                    f"Input text: {ex.input_text}\n"
                    f"Output:\n{ex.expected_output}"
                )
        parts.append(
            "### Task\n"
            f"Input table:\n{self.task_table}\n"
            f"Input text: {self.task_text}"
        )
        parts.append(self.output_template)
        parts.append(self.reasoning_instruction)
        return "\n\n".join(parts)

    def render(self) -> str:
        return f"{self.system_instruction}\n\n{self.render_body()}"


def build_prompt(
    narrative,
    table: DataTable,
    examples: Sequence[PromptExample] = (),
    cfg: Optional[RetrievalConfig] = None,
) -> PromptSequence:
    """Assemble the full prompt sequence for one narrative."""
    cfg = cfg or RetrievalConfig()
    examples = tuple(examples)
    if len(examples) > cfg.k:
        raise ValueError(f"{len(examples)} examples exceed k={cfg.k}")
    for name in RECORD_FIELDS:
        assert f'"{name}"' in OUTPUT_TEMPLATE
    text = getattr(narrative, "text", narrative)
    return PromptSequence(
        system_instruction=SYSTEM_INSTRUCTION,
        examples=examples,
        task_table=table_digest(table),
        task_text=text,
        output_template=OUTPUT_TEMPLATE,
        reasoning_instruction=REASONING_INSTRUCTION,
    )


def build_segmentation_prompt(article: str, table: DataTable) -> PromptSequence:
    """Prompt asking for a subject-wise segmentation of the article."""
    instruction = (
        "Split the article into narratives, one per subject, without changing "
        "a single character. Answer with a JSON array of strings whose "
        "concatenation reproduces the article exactly (keep all whitespace)."
    )
    return PromptSequence(
        system_instruction=SYSTEM_INSTRUCTION,
        examples=(),
        task_table=table_digest(table),
        task_text=article,
        output_template=instruction,
        reasoning_instruction="",
    )
