"""Property suites for the detectors.

The heavyweight oracle-equivalence run (1000 series per pattern) lives in the
acceptance suite; here a smaller randomized sample plus the invariance
properties keep the fast loop honest.
"""

import random

import pytest

from narrachart.trendlex import (
    DetectorParams,
    PatternId,
    SeriesTooShort,
    detect_pattern,
    verify_span,
)

from .oracles import oracle_detect

SHAPE_PATTERNS = [
    PatternId.MONOTONE_RISE,
    PatternId.MONOTONE_DECLINE,
    PatternId.STEADY_RISE,
    PatternId.STEADY_DECLINE,
    PatternId.SHARP_INCREASE,
    PatternId.SHARP_DECREASE,
    PatternId.FLUCTUATION,
    PatternId.PEAK,
    PatternId.TROUGH,
    PatternId.DOUBLE_BOTTOM,
    PatternId.DOUBLE_TOP,
    PatternId.TRIPLE_TOP,
    PatternId.HEAD_AND_SHOULDERS,
]


def random_series(rng, max_len=12, values=range(5)):
    return [rng.choice(values) for _ in range(rng.randint(2, max_len))]


def run_both(series, pid, params=None):
    try:
        got = detect_pattern(series, pid, params)
    except SeriesTooShort:
        got = SeriesTooShort
    try:
        want = oracle_detect(series, pid, params)
    except SeriesTooShort:
        want = SeriesTooShort
    return got, want


@pytest.mark.parametrize("pid", list(PatternId))
def test_oracle_equivalence_sample(pid):
    rng = random.Random(f"sample-{pid.value}")
    for _ in range(150):
        series = random_series(rng)
        got, want = run_both(series, pid)
        assert got == want, f"{pid.value} disagreed on {series}"


@pytest.mark.parametrize("pid", SHAPE_PATTERNS)
def test_shift_scale_invariance(pid):
    rng = random.Random(f"invariance-{pid.value}")
    for _ in range(120):
        series = random_series(rng)
        a = rng.choice([0.5, 1.0, 2.0, 4.0])
        b = rng.choice([-5, -1, 0, 1, 10])
        scaled = [a * v + b for v in series]
        got, _ = run_both(series, pid)
        got_scaled, _ = run_both(scaled, pid)
        assert got == got_scaled, f"{pid.value} not invariant on {series} (a={a}, b={b})"


@pytest.mark.parametrize("pid", SHAPE_PATTERNS)
def test_verify_matches_detect_membership(pid):
    rng = random.Random(f"verify-{pid.value}")
    for _ in range(100):
        series = random_series(rng)
        try:
            spans = detect_pattern(series, pid)
        except SeriesTooShort:
            continue
        for span in spans:
            assert verify_span(series, pid, span)


def test_detect_with_nulls_matches_oracle():
    rng = random.Random("nulls")
    for _ in range(200):
        series = [
            None if rng.random() < 0.25 else rng.randint(0, 4)
            for _ in range(rng.randint(2, 12))
        ]
        for pid in (PatternId.MONOTONE_RISE, PatternId.PEAK, PatternId.DOUBLE_BOTTOM):
            got, want = run_both(series, pid)
            assert got == want, f"{pid.value} disagreed on {series}"


def test_deterministic_across_calls():
    series = [3, 1, 4, 1, 5, 9, 2, 6]
    for pid in SHAPE_PATTERNS:
        assert detect_pattern(series, pid) == detect_pattern(series, pid)
