import pytest

from narrachart.trendlex import (
    DetectorParams,
    EmptySeries,
    Lexicon,
    PatternId,
    SeriesTooShort,
    Span,
    TrendKind,
    TrendPattern,
    classify_trend,
    default_lexicon,
    detect_pattern,
    load_lexicon,
    summary_statistic,
    verify_span,
)

from .oracles import oracle_detect


class TestClassify:
    def test_attested_phrases(self):
        assert classify_trend("sharp decrease") == (
            PatternId.SHARP_DECREASE,
            TrendKind.CHANGE_PATTERN,
        )
        assert classify_trend("double-bottom") == (
            PatternId.DOUBLE_BOTTOM,
            TrendKind.CHANGE_PATTERN,
        )
        assert classify_trend("triple top") == (
            PatternId.TRIPLE_TOP,
            TrendKind.CHANGE_PATTERN,
        )
        assert classify_trend("risen steadily") == (
            PatternId.STEADY_RISE,
            TrendKind.CHANGE_PATTERN,
        )
        assert classify_trend("inched up") == (
            PatternId.STEADY_RISE,
            TrendKind.CHANGE_PATTERN,
        )

    def test_unknown_phrase(self):
        assert classify_trend("strawberry") is None

    def test_case_and_hyphen_insensitive(self):
        assert classify_trend("Sharp-Decrease") == (
            PatternId.SHARP_DECREASE,
            TrendKind.CHANGE_PATTERN,
        )

    def test_longest_alias_wins_inside_phrase(self):
        # "sharp decrease" must beat the shorter "decrease"
        got = classify_trend("suffers a sharp decrease overall")
        assert got == (PatternId.SHARP_DECREASE, TrendKind.CHANGE_PATTERN)

    def test_summary_and_event_kinds(self):
        assert classify_trend("record low")[1] is TrendKind.SUMMARY_INDICATOR
        assert classify_trend("on average")[1] is TrendKind.SUMMARY_INDICATOR
        assert classify_trend("crisis")[1] is TrendKind.SPECIAL_EVENT

    def test_duplicate_alias_across_patterns_rejected(self):
        with pytest.raises(ValueError, match="maps to both"):
            Lexicon(
                [
                    TrendPattern(PatternId.PEAK, TrendKind.CHANGE_PATTERN, ("apex",)),
                    TrendPattern(PatternId.TROUGH, TrendKind.CHANGE_PATTERN, ("apex",)),
                ]
            )

    def test_default_lexicon_loads(self):
        lex = default_lexicon()
        ids = {p.id for p in lex.patterns}
        assert ids == set(PatternId)

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text(
            '[{"id": "peak", "kind": "change_pattern", "aliases": ["apex"]}]'
        )
        lex = load_lexicon(str(path))
        assert lex.classify("apex") == (PatternId.PEAK, TrendKind.CHANGE_PATTERN)


class TestFindMentions:
    def test_non_overlapping_longest_first(self):
        lex = default_lexicon()
        text = "the change in real GDP suffers a sharp decrease then a rise."
        got = [(m.pattern_id, m.text) for m in lex.find_mentions(text)]
        assert got == [
            (PatternId.SHARP_DECREASE, "sharp decrease"),
            (PatternId.MONOTONE_RISE, "rise"),
        ]

    def test_offsets_are_verbatim(self):
        lex = default_lexicon()
        text = "VC fundings have risen steadily over the past decade."
        (m,) = lex.find_mentions(text)
        assert text[m.char_start : m.char_end] == m.text == "risen steadily"
        assert m.pattern_id is PatternId.STEADY_RISE


class TestDetectExamples:
    def test_monotone_rise_full_span(self):
        assert detect_pattern([1, 2, 3, 4, 5], PatternId.MONOTONE_RISE) == [
            Span(1, 5, 1.0)
        ]

    def test_constant_series_has_no_rise(self):
        assert detect_pattern([5, 5, 5, 5], PatternId.MONOTONE_RISE) == []

    def test_double_bottom_w_shape(self):
        got = detect_pattern([3, 1, 2, 1, 3], PatternId.DOUBLE_BOTTOM)
        assert got == oracle_detect([3, 1, 2, 1, 3], PatternId.DOUBLE_BOTTOM)
        assert [(s.start_row, s.end_row) for s in got] == [(1, 5)]

    def test_head_and_shoulders(self):
        series = [1, 4, 2, 5, 2, 4, 1]
        got = detect_pattern(series, PatternId.HEAD_AND_SHOULDERS)
        assert got == oracle_detect(series, PatternId.HEAD_AND_SHOULDERS)
        assert [(s.start_row, s.end_row) for s in got] == [(1, 7)]

    def test_gdp_shape_sharp_decrease_then_rise(self, gdp_table):
        series = gdp_table.column_values("change in GDP")
        sharp = detect_pattern(series, PatternId.SHARP_DECREASE)
        rise = detect_pattern(series, PatternId.MONOTONE_RISE)
        assert sharp == oracle_detect(series, PatternId.SHARP_DECREASE)
        assert rise == oracle_detect(series, PatternId.MONOTONE_RISE)
        assert (sharp[0].start_row, sharp[0].end_row) == (7, 10)
        assert (rise[0].start_row, rise[0].end_row) == (11, 14)

    def test_nulls_skipped_with_row_bookkeeping(self):
        got = detect_pattern([1, None, 2, 3], PatternId.MONOTONE_RISE)
        assert [(s.start_row, s.end_row) for s in got] == [(1, 4)]

    def test_series_too_short(self):
        with pytest.raises(SeriesTooShort):
            detect_pattern([1, 2, 3], PatternId.DOUBLE_BOTTOM)
        with pytest.raises(SeriesTooShort):
            detect_pattern([1], PatternId.MONOTONE_RISE)

    def test_event_point_has_no_numeric_signature(self):
        assert detect_pattern([1, 2, 3], PatternId.EVENT_POINT) == []

    def test_spans_sorted_best_first_earliest_tiebreak(self):
        # longer rise first; equal-length rises ordered by start row
        got = detect_pattern([1, 2, 0, 1, 2], PatternId.MONOTONE_RISE)
        assert [(s.start_row, s.end_row) for s in got] == [(3, 5), (1, 2)]
        equal = detect_pattern([1, 2, 0, 1, 0], PatternId.MONOTONE_RISE)
        assert [(s.start_row, s.end_row) for s in equal] == [(1, 2), (3, 4)]


class TestSummaryStatistic:
    def test_global_max_reports_ties_in_order(self):
        assert summary_statistic([2, 9, 9, 1], PatternId.GLOBAL_MAX) == (9.0, [2, 3])

    def test_mean_level_reports_no_rows(self):
        value, rows = summary_statistic([2, 9, 9, 1], PatternId.MEAN_LEVEL)
        assert value == pytest.approx(5.25)
        assert rows == []

    def test_singleton_min(self):
        assert summary_statistic([7], PatternId.GLOBAL_MIN) == (7.0, [1])

    def test_empty_series(self):
        with pytest.raises(EmptySeries):
            summary_statistic([None, None], PatternId.GLOBAL_MAX)

    def test_non_summary_pattern_rejected(self):
        with pytest.raises(ValueError):
            summary_statistic([1, 2], PatternId.PEAK)


class TestVerifySpan:
    def test_gdp_sharp_decrease_window(self, gdp_table):
        series = gdp_table.column_values("change in GDP")
        assert verify_span(series, PatternId.SHARP_DECREASE, Span(7, 10))

    def test_rise_is_not_decline(self):
        assert not verify_span([1, 2, 3], PatternId.MONOTONE_DECLINE, Span(1, 3))

    def test_length_one_multi_point_pattern(self):
        assert not verify_span([1, 2, 3, 4], PatternId.MONOTONE_RISE, Span(2, 2))

    def test_agrees_with_detect_for_maximal_spans(self, gdp_table):
        series = gdp_table.column_values("change in GDP")
        for pid in (PatternId.SHARP_DECREASE, PatternId.MONOTONE_RISE, PatternId.FLUCTUATION):
            spans = detect_pattern(series, pid)
            for span in spans:
                assert verify_span(series, pid, span)


class TestDetectorParams:
    def test_all_params_strictly_positive(self):
        with pytest.raises(ValueError):
            DetectorParams(sharp_slope_factor=0)
        with pytest.raises(ValueError):
            DetectorParams(min_span_len=0)

    def test_steady_cv_threshold_is_effective(self):
        # steps 15,10,5,5: cv ~0.474 passes at 0.5, fails at 0.3
        series = [60, 75, 85, 90, 95]
        assert detect_pattern(series, PatternId.STEADY_RISE) == [Span(1, 5, 1.0)]
        tight = DetectorParams(steady_cv=0.3)
        full = detect_pattern(series, PatternId.STEADY_RISE, tight)
        assert Span(1, 5, 1.0) not in full
