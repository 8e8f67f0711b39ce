"""Trend vocabulary lexicon and deterministic change-pattern detectors.

The lexicon maps surface phrases ("risen steadily", "double-bottom") to named
patterns. Detectors locate each pattern's row span in a numeric series using
closed-form predicates over window increments and interior strict extrema:

* monotone rise/decline: every step strictly positive / negative.
* steady rise/decline: monotone and the coefficient of variation of the
  steps is at most ``steady_cv``.
* sharp increase/decrease: monotone and the mean absolute step of the window
  exceeds ``sharp_slope_factor`` times the series' mean absolute step.
* fluctuation: the window contains at least two direction reversals.
* peak / trough: exactly one interior strict extremum (a max / min) standing
  at least ``prominence`` above / below both window endpoints, where
  ``prominence = extremum_prominence * (series max - series min)``.
* double bottom / top: interior extrema sequence low-high-low (resp.
  high-low-high) with the middle rebound and both endpoints beyond the two
  bottoms (tops) by at least ``prominence``.
* triple top: extrema high-low-high-low-high with near-equal highs (spread
  at most ``prominence``), highs above lows by ``prominence``, endpoints
  below the lowest high.
* head and shoulders: same extrema shape but the middle high strictly above
  both shoulders.
* global max / min: single-row windows at the series extreme value.
* mean level: the whole series (the level is a property of all rows).
* event point: no numeric signature; positions come from narrative
  timestamps, so the detector never fires.

A window matches *maximally* when no strictly larger matching window contains
it; overlapping maximal windows are resolved best score first, earliest start
first. Scores are span length over series length (1.0 for summary patterns).
"""

from __future__ import annotations

import json
import math
import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, Sequence, Union


class SeriesTooShort(ValueError):
    """Series has fewer non-null points than the pattern's minimum."""


class EmptySeries(ValueError):
    """Series has no non-null points."""


class TrendKind(str, Enum):
    CHANGE_PATTERN = "change_pattern"
    SUMMARY_INDICATOR = "summary_indicator"
    SPECIAL_EVENT = "special_event"


class PatternId(str, Enum):
    MONOTONE_RISE = "monotone_rise"
    MONOTONE_DECLINE = "monotone_decline"
    STEADY_RISE = "steady_rise"
    STEADY_DECLINE = "steady_decline"
    SHARP_INCREASE = "sharp_increase"
    SHARP_DECREASE = "sharp_decrease"
    FLUCTUATION = "fluctuation"
    PEAK = "peak"
    TROUGH = "trough"
    DOUBLE_BOTTOM = "double_bottom"
    DOUBLE_TOP = "double_top"
    TRIPLE_TOP = "triple_top"
    HEAD_AND_SHOULDERS = "head_and_shoulders"
    GLOBAL_MAX = "global_max"
    GLOBAL_MIN = "global_min"
    MEAN_LEVEL = "mean_level"
    EVENT_POINT = "event_point"


SUMMARY_PATTERNS = {PatternId.GLOBAL_MAX, PatternId.GLOBAL_MIN, PatternId.MEAN_LEVEL}

_KIND_OF = {
    PatternId.GLOBAL_MAX: TrendKind.SUMMARY_INDICATOR,
    PatternId.GLOBAL_MIN: TrendKind.SUMMARY_INDICATOR,
    PatternId.MEAN_LEVEL: TrendKind.SUMMARY_INDICATOR,
    PatternId.EVENT_POINT: TrendKind.SPECIAL_EVENT,
}


def kind_of(pattern_id: PatternId) -> TrendKind:
    return _KIND_OF.get(pattern_id, TrendKind.CHANGE_PATTERN)


@dataclass(frozen=True)
class TrendPattern:
    id: PatternId
    kind: TrendKind
    aliases: tuple[str, ...]


@dataclass(frozen=True)
class Span:
    """A matched row interval, 1-based inclusive, with match quality in [0,1]."""

    start_row: int
    end_row: int
    score: float = 1.0


@dataclass(frozen=True)
class DetectorParams:
    sharp_slope_factor: float = 2.0
    steady_cv: float = 0.5
    extremum_prominence: float = 0.1
    min_span_len: int = 3

    def __post_init__(self):
        for name in ("sharp_slope_factor", "steady_cv", "extremum_prominence"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.min_span_len <= 0:
            raise ValueError("min_span_len must be strictly positive")


# --- lexicon --------------------------------------------------------------

def normalize_phrase(phrase: str) -> str:
    return re.sub(r"[\s\-_]+", " ", phrase.strip().lower()).strip(" .,;:!?\"'()")


@dataclass(frozen=True)
class Mention:
    pattern_id: PatternId
    kind: TrendKind
    text: str
    char_start: int
    char_end: int


class Lexicon:
    """Alias-to-pattern lookup. Every normalized alias maps to exactly one pattern."""

    def __init__(self, patterns: Iterable[TrendPattern]):
        self.patterns = tuple(patterns)
        self._alias_map: dict[str, TrendPattern] = {}
        for pat in self.patterns:
            for alias in pat.aliases:
                key = normalize_phrase(alias)
                if not key:
                    continue
                prior = self._alias_map.get(key)
                if prior is not None and prior.id is not pat.id:
                    raise ValueError(
                        f"alias {alias!r} maps to both {prior.id.value} and {pat.id.value}"
                    )
                self._alias_map[key] = pat
        self._regex = self._build_regex()

    def _build_regex(self) -> Optional[re.Pattern]:
        if not self._alias_map:
            return None
        alternatives = sorted(self._alias_map, key=lambda a: (-len(a), a))
        parts = [
            r"[\s\-_]+".join(re.escape(tok) for tok in alias.split())
            for alias in alternatives
        ]
        return re.compile(r"\b(?:" + "|".join(parts) + r")\b", re.IGNORECASE)

    def classify(self, phrase: str) -> Optional[tuple[PatternId, TrendKind]]:
        key = normalize_phrase(phrase)
        if not key:
            return None
        hit = self._alias_map.get(key)
        if hit is not None:
            return (hit.id, hit.kind)
        # longest alias contained in the phrase, on token boundaries
        tokens = key.split()
        best: Optional[TrendPattern] = None
        best_len = 0
        for alias, pat in self._alias_map.items():
            atoks = alias.split()
            if len(atoks) > len(tokens) or len(alias) <= best_len:
                continue
            for s in range(len(tokens) - len(atoks) + 1):
                if tokens[s : s + len(atoks)] == atoks:
                    best, best_len = pat, len(alias)
                    break
        return (best.id, best.kind) if best else None

    def find_mentions(self, text: str) -> list[Mention]:
        """Non-overlapping alias occurrences, longest match preferred."""
        if self._regex is None:
            return []
        raw = [(m.start(), m.end(), m.group(0)) for m in self._regex.finditer(text)]
        raw.sort(key=lambda t: (-(t[1] - t[0]), t[0]))
        taken: list[tuple[int, int]] = []
        chosen = []
        for start, end, surface in raw:
            if any(start < e and s < end for s, e in taken):
                continue
            pat = self._alias_map.get(normalize_phrase(surface))
            if pat is None:
                continue
            taken.append((start, end))
            chosen.append(Mention(pat.id, pat.kind, surface, start, end))
        chosen.sort(key=lambda m: m.char_start)
        return chosen


def load_lexicon(path: Optional[str] = None) -> Lexicon:
    """Load the lexicon from a JSON file (the shipped default when no path)."""
    if path is None:
        data = json.loads(
            resources.files("narrachart").joinpath("data/lexicon.json").read_text()
        )
    else:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    patterns = [
        TrendPattern(
            id=PatternId(entry["id"]),
            kind=TrendKind(entry["kind"]),
            aliases=tuple(entry["aliases"]),
        )
        for entry in data
    ]
    return Lexicon(patterns)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    return load_lexicon(None)


def classify_trend(
    phrase: str, lexicon: Union[Lexicon, Iterable[TrendPattern], None] = None
) -> Optional[tuple[PatternId, TrendKind]]:
    """Case-, hyphen- and space-insensitive alias lookup; longest match wins."""
    if lexicon is None:
        lexicon = default_lexicon()
    elif not isinstance(lexicon, Lexicon):
        lexicon = Lexicon(lexicon)
    return lexicon.classify(phrase)


# --- series context -------------------------------------------------------

class _SeriesCtx:
    """Per-series precomputation shared by all window predicates."""

    __slots__ = (
        "vals", "rows", "m", "steps", "s1", "s2", "rev", "inc_until",
        "dec_until", "ex_pos", "ex_typ", "vmax", "vmin", "prom",
        "mean_abs_step",
    )

    def __init__(self, series: Sequence, params: DetectorParams):
        vals: list[float] = []
        rows: list[int] = []
        for idx, v in enumerate(series, start=1):
            if isinstance(v, (int, float)) and not isinstance(v, bool) and not (
                isinstance(v, float) and math.isnan(v)
            ):
                vals.append(float(v))
                rows.append(idx)
        self.vals = vals
        self.rows = rows
        self.m = m = len(vals)
        self.steps = steps = [vals[k + 1] - vals[k] for k in range(m - 1)]
        s1 = [0.0] * (m)
        s2 = [0.0] * (m)
        for k, d in enumerate(steps):
            s1[k + 1] = s1[k] + d
            s2[k + 1] = s2[k] + d * d
        self.s1, self.s2 = s1, s2
        self.rev = [
            k for k in range(1, m - 1) if steps[k - 1] * steps[k] < 0
        ]
        inc = [0] * m
        dec = [0] * m
        if m:
            inc[m - 1] = dec[m - 1] = m - 1
            for k in range(m - 2, -1, -1):
                inc[k] = inc[k + 1] if steps[k] > 0 else k
                dec[k] = dec[k + 1] if steps[k] < 0 else k
        self.inc_until, self.dec_until = inc, dec
        ex_pos: list[int] = []
        ex_typ: list[int] = []
        for k in range(1, m - 1):
            if vals[k] > vals[k - 1] and vals[k] > vals[k + 1]:
                ex_pos.append(k)
                ex_typ.append(1)
            elif vals[k] < vals[k - 1] and vals[k] < vals[k + 1]:
                ex_pos.append(k)
                ex_typ.append(-1)
        self.ex_pos, self.ex_typ = ex_pos, ex_typ
        self.vmax = max(vals) if vals else 0.0
        self.vmin = min(vals) if vals else 0.0
        self.prom = params.extremum_prominence * (self.vmax - self.vmin)
        self.mean_abs_step = (
            sum(abs(d) for d in steps) / len(steps) if steps else 0.0
        )

    def window_extrema(self, i: int, j: int) -> tuple[list[int], list[int]]:
        lo = bisect_right(self.ex_pos, i)
        hi = bisect_left(self.ex_pos, j)
        return self.ex_pos[lo:hi], self.ex_typ[lo:hi]

    def reversals(self, i: int, j: int) -> int:
        return bisect_right(self.rev, j - 1) - bisect_left(self.rev, i + 1)

    def mean_step(self, i: int, j: int) -> float:
        return (self.s1[j] - self.s1[i]) / (j - i)

    def step_cv(self, i: int, j: int) -> float:
        k = j - i
        mean = (self.s1[j] - self.s1[i]) / k
        var = (self.s2[j] - self.s2[i]) / k - mean * mean
        if mean == 0:
            return math.inf
        return math.sqrt(max(var, 0.0)) / abs(mean)


# --- predicates -----------------------------------------------------------

def _pred_monotone_rise(c, i, j, p):
    return j <= c.inc_until[i]


def _pred_monotone_decline(c, i, j, p):
    return j <= c.dec_until[i]


def _pred_steady_rise(c, i, j, p):
    return j <= c.inc_until[i] and c.step_cv(i, j) <= p.steady_cv


def _pred_steady_decline(c, i, j, p):
    return j <= c.dec_until[i] and c.step_cv(i, j) <= p.steady_cv


def _pred_sharp_increase(c, i, j, p):
    return (
        j <= c.inc_until[i]
        and c.mean_step(i, j) > p.sharp_slope_factor * c.mean_abs_step
    )


def _pred_sharp_decrease(c, i, j, p):
    return (
        j <= c.dec_until[i]
        and -c.mean_step(i, j) > p.sharp_slope_factor * c.mean_abs_step
    )


def _pred_fluctuation(c, i, j, p):
    return c.reversals(i, j) >= 2


def _pred_peak(c, i, j, p):
    pos, typ = c.window_extrema(i, j)
    if len(pos) != 1 or typ[0] != 1:
        return False
    v = c.vals
    top = v[pos[0]]
    lo = max(v[i], v[j])
    return top > lo and top - lo >= c.prom


def _pred_trough(c, i, j, p):
    pos, typ = c.window_extrema(i, j)
    if len(pos) != 1 or typ[0] != -1:
        return False
    v = c.vals
    bottom = v[pos[0]]
    hi = min(v[i], v[j])
    return bottom < hi and hi - bottom >= c.prom


def _pred_double_bottom(c, i, j, p):
    pos, typ = c.window_extrema(i, j)
    if typ != [-1, 1, -1]:
        return False
    v = c.vals
    low = max(v[pos[0]], v[pos[2]])
    mid = v[pos[1]]
    if not (mid > low and v[i] > low and v[j] > low):
        return False
    return min(v[i], v[j], mid) - low >= c.prom


def _pred_double_top(c, i, j, p):
    pos, typ = c.window_extrema(i, j)
    if typ != [1, -1, 1]:
        return False
    v = c.vals
    top = min(v[pos[0]], v[pos[2]])
    mid = v[pos[1]]
    if not (mid < top and v[i] < top and v[j] < top):
        return False
    return top - max(v[i], v[j], mid) >= c.prom


def _pred_triple_top(c, i, j, p):
    pos, typ = c.window_extrema(i, j)
    if typ != [1, -1, 1, -1, 1]:
        return False
    v = c.vals
    tops = [v[pos[0]], v[pos[2]], v[pos[4]]]
    lows = [v[pos[1]], v[pos[3]]]
    if max(tops) - min(tops) > c.prom:
        return False
    if min(tops) - max(lows) < c.prom:
        return False
    return v[i] < min(tops) and v[j] < min(tops)


def _pred_head_and_shoulders(c, i, j, p):
    pos, typ = c.window_extrema(i, j)
    if typ != [1, -1, 1, -1, 1]:
        return False
    v = c.vals
    s1, head, s2 = v[pos[0]], v[pos[2]], v[pos[4]]
    lows = [v[pos[1]], v[pos[3]]]
    if not (head > s1 and head > s2):
        return False
    if min(s1, s2) - max(lows) < c.prom:
        return False
    return v[i] < min(s1, s2) and v[j] < min(s1, s2)


def _pred_global_max(c, i, j, p):
    return i == j and c.vals[i] == c.vmax


def _pred_global_min(c, i, j, p):
    return i == j and c.vals[i] == c.vmin


def _pred_mean_level(c, i, j, p):
    return i == 0 and j == c.m - 1


def _pred_event_point(c, i, j, p):
    return False


_PREDICATES = {
    PatternId.MONOTONE_RISE: _pred_monotone_rise,
    PatternId.MONOTONE_DECLINE: _pred_monotone_decline,
    PatternId.STEADY_RISE: _pred_steady_rise,
    PatternId.STEADY_DECLINE: _pred_steady_decline,
    PatternId.SHARP_INCREASE: _pred_sharp_increase,
    PatternId.SHARP_DECREASE: _pred_sharp_decrease,
    PatternId.FLUCTUATION: _pred_fluctuation,
    PatternId.PEAK: _pred_peak,
    PatternId.TROUGH: _pred_trough,
    PatternId.DOUBLE_BOTTOM: _pred_double_bottom,
    PatternId.DOUBLE_TOP: _pred_double_top,
    PatternId.TRIPLE_TOP: _pred_triple_top,
    PatternId.HEAD_AND_SHOULDERS: _pred_head_and_shoulders,
    PatternId.GLOBAL_MAX: _pred_global_max,
    PatternId.GLOBAL_MIN: _pred_global_min,
    PatternId.MEAN_LEVEL: _pred_mean_level,
    PatternId.EVENT_POINT: _pred_event_point,
}


def min_points(pattern_id: PatternId, params: DetectorParams) -> int:
    """Minimum number of non-null points a pattern needs."""
    pid = PatternId(pattern_id)
    if pid in (PatternId.MONOTONE_RISE, PatternId.MONOTONE_DECLINE,
               PatternId.SHARP_INCREASE, PatternId.SHARP_DECREASE):
        return 2
    if pid in (PatternId.STEADY_RISE, PatternId.STEADY_DECLINE):
        return max(3, params.min_span_len)
    if pid is PatternId.FLUCTUATION:
        return max(4, params.min_span_len)
    if pid in (PatternId.PEAK, PatternId.TROUGH):
        return 3
    if pid in (PatternId.DOUBLE_BOTTOM, PatternId.DOUBLE_TOP):
        return 5
    if pid in (PatternId.TRIPLE_TOP, PatternId.HEAD_AND_SHOULDERS):
        return 7
    return 1


def _window_score(pattern_id: PatternId, i: int, j: int, m: int) -> float:
    if pattern_id in SUMMARY_PATTERNS:
        return 1.0
    return (j - i + 1) / m


def _matching_windows(
    ctx: _SeriesCtx, pattern_id: PatternId, params: DetectorParams, need: int
) -> list[tuple[int, int]]:
    pred = _PREDICATES[pattern_id]
    m = ctx.m
    out = []
    if pattern_id in (PatternId.GLOBAL_MAX, PatternId.GLOBAL_MIN):
        target = ctx.vmax if pattern_id is PatternId.GLOBAL_MAX else ctx.vmin
        return [(k, k) for k in range(m) if ctx.vals[k] == target]
    if pattern_id is PatternId.MEAN_LEVEL:
        return [(0, m - 1)]
    if pattern_id is PatternId.EVENT_POINT:
        return []
    rise_family = pattern_id in (
        PatternId.MONOTONE_RISE, PatternId.STEADY_RISE, PatternId.SHARP_INCREASE
    )
    fall_family = pattern_id in (
        PatternId.MONOTONE_DECLINE, PatternId.STEADY_DECLINE, PatternId.SHARP_DECREASE
    )
    for i in range(m):
        if rise_family:
            hi = ctx.inc_until[i]
        elif fall_family:
            hi = ctx.dec_until[i]
        else:
            hi = m - 1
        for j in range(i + need - 1, hi + 1):
            if pred(ctx, i, j, params):
                out.append((i, j))
    return out


def _select_spans(
    windows: list[tuple[int, int]], ctx: _SeriesCtx, pattern_id: PatternId
) -> list[Span]:
    # drop windows strictly contained in another matching window
    windows = sorted(windows, key=lambda w: (w[0], -w[1]))
    maximal: list[tuple[int, int]] = []
    best_j = -1
    for i, j in windows:
        if j > best_j:
            maximal.append((i, j))
            best_j = j
    # resolve overlaps greedily, best score first, earliest start first
    scored = sorted(
        maximal,
        key=lambda w: (-_window_score(pattern_id, w[0], w[1], ctx.m), w[0]),
    )
    kept: list[tuple[int, int]] = []
    for i, j in scored:
        if all(j < a or b < i for a, b in kept):
            kept.append((i, j))
    return [
        Span(ctx.rows[i], ctx.rows[j], _window_score(pattern_id, i, j, ctx.m))
        for i, j in kept
    ]


def detect_pattern(
    series: Sequence,
    pattern_id: Union[PatternId, str],
    params: Optional[DetectorParams] = None,
) -> list[Span]:
    """All maximal non-overlapping spans where the pattern holds, best first.

    Nulls are skipped with index bookkeeping: spans carry original 1-based
    row indices whose endpoints are non-null rows.
    """
    pid = PatternId(pattern_id)
    params = params or DetectorParams()
    ctx = _SeriesCtx(series, params)
    need = min_points(pid, params)
    pointlike = pid in SUMMARY_PATTERNS or pid is PatternId.EVENT_POINT
    floor = need if pointlike else max(need, 2)
    if ctx.m < floor:
        raise SeriesTooShort(
            f"{pid.value} needs at least {floor} points, got {ctx.m}"
        )
    windows = _matching_windows(ctx, pid, params, need)
    return _select_spans(windows, ctx, pid)


def verify_span(
    series: Sequence,
    pattern_id: Union[PatternId, str],
    span: Span,
    params: Optional[DetectorParams] = None,
) -> bool:
    """True iff the pattern predicate holds on exactly that window."""
    pid = PatternId(pattern_id)
    params = params or DetectorParams()
    ctx = _SeriesCtx(series, params)
    try:
        i = ctx.rows.index(span.start_row)
        j = ctx.rows.index(span.end_row)
    except ValueError:
        return False
    if j < i or j - i + 1 < min_points(pid, params):
        return False
    return _PREDICATES[pid](ctx, i, j, params)


def summary_statistic(
    series: Sequence, pattern_id: Union[PatternId, str]
) -> tuple[float, list[int]]:
    """Value of a summary pattern plus every 1-based row attaining it.

    ``mean_level`` reports no rows (the level belongs to the whole series).
    """
    pid = PatternId(pattern_id)
    if pid not in SUMMARY_PATTERNS:
        raise ValueError(f"{pid.value} is not a summary pattern")
    ctx = _SeriesCtx(series, DetectorParams())
    if ctx.m == 0:
        raise EmptySeries("no non-null points")
    if pid is PatternId.MEAN_LEVEL:
        return (sum(ctx.vals) / ctx.m, [])
    target = ctx.vmax if pid is PatternId.GLOBAL_MAX else ctx.vmin
    rows = [ctx.rows[k] for k in range(ctx.m) if ctx.vals[k] == target]
    return (target, rows)
