"""Independent brute-force oracles used to freeze expected values.

``oracle_detect`` scans every window exhaustively, applies the public
per-window predicate (``verify_span``), and re-derives maximality and
overlap resolution from the documented rules. It shares no enumeration or
selection code with the library.
"""

from __future__ import annotations

from narrachart.trendlex import (
    DetectorParams,
    PatternId,
    SUMMARY_PATTERNS,
    SeriesTooShort,
    Span,
    min_points,
    verify_span,
)


def _points(series):
    out = []
    for idx, v in enumerate(series, start=1):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            if v == v:  # not NaN
                out.append((idx, float(v)))
    return out


def oracle_detect(series, pattern_id, params=None) -> list[Span]:
    pid = PatternId(pattern_id)
    params = params or DetectorParams()
    pts = _points(series)
    m = len(pts)
    need = min_points(pid, params)
    pointlike = pid in SUMMARY_PATTERNS or pid is PatternId.EVENT_POINT
    floor = need if pointlike else max(need, 2)
    if m < floor:
        raise SeriesTooShort(f"oracle: {m} < {floor}")

    def score(a, b):
        return 1.0 if pid in SUMMARY_PATTERNS else (b - a + 1) / m

    matches = []
    for a in range(m):
        for b in range(a + need - 1, m):
            span = Span(pts[a][0], pts[b][0], score(a, b))
            if verify_span(series, pid, span, params):
                matches.append((a, b))
    maximal = [
        w
        for w in matches
        if not any(o != w and o[0] <= w[0] and w[1] <= o[1] for o in matches)
    ]
    ordered = sorted(maximal, key=lambda w: (-score(*w), w[0]))
    kept: list[tuple[int, int]] = []
    for a, b in ordered:
        if all(b < ka or kb < a for ka, kb in kept):
            kept.append((a, b))
    return [Span(pts[a][0], pts[b][0], score(a, b)) for a, b in kept]
