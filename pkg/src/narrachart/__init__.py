"""narrachart: bind financial narrative text to table data and render layered charts."""

__version__ = "0.1.0"

from .core import (
    BindingRecord,
    BindingResult,
    CellRef,
    ColumnKind,
    ColumnMeta,
    DataTable,
    Metrics,
    VocabKind,
    VocabSpan,
    validate_binding,
    validate_table,
)
from .trendlex import (
    DetectorParams,
    Lexicon,
    PatternId,
    Span,
    TrendKind,
    TrendPattern,
    classify_trend,
    default_lexicon,
    detect_pattern,
    summary_statistic,
    verify_span,
)
from .wire import (
    MalformedResponse,
    parse_binding,
    serialize_binding,
    table_from_csv,
    table_from_obj,
)

__all__ = [
    "BindingRecord",
    "BindingResult",
    "CellRef",
    "ColumnKind",
    "ColumnMeta",
    "DataTable",
    "DetectorParams",
    "Lexicon",
    "MalformedResponse",
    "Metrics",
    "PatternId",
    "Span",
    "TrendKind",
    "TrendPattern",
    "VocabKind",
    "VocabSpan",
    "classify_trend",
    "default_lexicon",
    "detect_pattern",
    "parse_binding",
    "serialize_binding",
    "summary_statistic",
    "table_from_csv",
    "table_from_obj",
    "validate_binding",
    "validate_table",
    "verify_span",
]
