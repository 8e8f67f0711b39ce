from .engine import bind, cross_check_trends
from .fallback import BindingFailed, FallbackAnalysis, analyze, fallback_bind
from .metrics import evaluate, format_report, load_gold_corpus
from .prompts import PromptSequence, build_prompt
from .providers import (
    FixtureMissing,
    FixtureProvider,
    HttpChatProvider,
    NullProvider,
    ProviderError,
    make_provider,
)
from .retrieval import (
    PromptExample,
    RetrievalConfig,
    append_prompt_db,
    load_prompt_db,
    select_examples,
)
from .segment import EmptyArticle, Narrative, segment_narratives

__all__ = [
    "BindingFailed",
    "EmptyArticle",
    "FallbackAnalysis",
    "FixtureMissing",
    "FixtureProvider",
    "HttpChatProvider",
    "Narrative",
    "NullProvider",
    "PromptExample",
    "PromptSequence",
    "ProviderError",
    "RetrievalConfig",
    "analyze",
    "append_prompt_db",
    "bind",
    "build_prompt",
    "cross_check_trends",
    "evaluate",
    "fallback_bind",
    "format_report",
    "load_gold_corpus",
    "load_prompt_db",
    "make_provider",
    "segment_narratives",
    "select_examples",
]
