import math
from fractions import Fraction

import numpy as np
import pytest

from fibnormal.analysis import diagnostics
from fibnormal.data.models import TermDelta
from fibnormal.errors import InvalidInputError
from fibnormal.sequence.digits import digit_string


def test_term_delta_single_digits():
    assert diagnostics.term_delta(digit_string(55, 10), 1, n=10).delta == pytest.approx(0.9)
    # five distinct digits at 0.2 each, five unseen at 0
    assert diagnostics.term_delta(digit_string(12345, 10), 1).delta == pytest.approx(0.1)


def test_term_delta_counts_unseen_blocks():
    row = diagnostics.term_delta(digit_string(0b1010, 2), 2, n=0)
    # blocks 10, 01, 10 over 4 digits: 10 -> 0.5, 01 -> 0.25, 00 and 11 unseen
    assert row.delta == pytest.approx(0.25)
    assert row.digit_length == 4 and row.k == 2


def test_term_delta_needs_a_block():
    with pytest.raises(InvalidInputError):
        diagnostics.term_delta(digit_string(5, 10), 2)
    with pytest.raises(InvalidInputError):
        diagnostics.term_delta(digit_string(55, 10), 0)


def test_per_term_deltas_skip_short_terms():
    rows = diagnostics.per_term_deltas(10, 30, k=2)
    assert [r.n for r in rows] == list(range(7, 31))
    assert all(r.k == 2 for r in rows)


def test_per_term_deltas_partitioned():
    sequential = diagnostics.per_term_deltas(10, 300)
    assert diagnostics.per_term_deltas(10, 300, partitions=3) == sequential
    assert len(sequential) == 300


def test_census_counts_and_fractions():
    deltas = [TermDelta(n, 20, 1, d) for n, d in enumerate([0.3, 0.06, 0.01, 0.001], start=20)]
    deltas.append(TermDelta(3, 1, 1, 0.9))  # too short to qualify
    rows = diagnostics.census(deltas, [0.05, 0.005], min_length=10)
    assert [(r.epsilon, r.count, r.fraction) for r in rows] == [(0.05, 2, 0.5), (0.005, 3, 0.75)]


def test_census_is_monotone_in_epsilon():
    deltas = diagnostics.per_term_deltas(10, 400)
    rows = diagnostics.census(deltas)
    counts = [r.count for r in rows]
    assert counts == sorted(counts)
    with pytest.raises(InvalidInputError):
        diagnostics.census(deltas, [0.0])


def test_iid_baselines():
    assert diagnostics.iid_max_dev_baseline(900, 10) == pytest.approx(1.86 * 0.01)
    assert diagnostics.iid_max_dev_baseline(100, 2) == pytest.approx(math.sqrt(2 / math.pi) / 20)
    with pytest.raises(InvalidInputError):
        diagnostics.iid_max_dev_baseline(0, 10)


def test_monte_carlo_baseline_is_seeded():
    first = diagnostics.iid_max_dev_baseline(100, 3, trials=2000, seed=7)
    assert diagnostics.iid_max_dev_baseline(100, 3, trials=2000, seed=7) == first
    assert 0.02 < first < 0.1


def test_baseline_ratio_is_near_one():
    deltas = diagnostics.per_term_deltas(10, 1200)
    summary = diagnostics.baseline_ratio_summary(deltas, 10)
    assert summary.terms == sum(d.digit_length >= 200 for d in deltas)
    assert 0.5 < summary.mean < 1.5
    assert summary.std > 0


def test_baseline_ratio_without_long_terms():
    summary = diagnostics.baseline_ratio_summary(diagnostics.per_term_deltas(10, 20), 10)
    assert summary.terms == 0
    assert math.isnan(summary.mean)


def test_benford():
    assert diagnostics.benford_freq(1) == pytest.approx(math.log10(2))
    assert sum(diagnostics.benford_freq(d) for d in range(1, 10)) == pytest.approx(1.0)
    assert diagnostics.benford_freq(1, 2) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        diagnostics.benford_freq(0)
    with pytest.raises(InvalidInputError):
        diagnostics.benford_freq(10, 10)


def test_leading_digits_of_first_ten_terms():
    freqs = diagnostics.leading_digit_empirical(10)
    # 1 1 2 3 5 8 13 21 34 55
    assert freqs.tolist() == [0.0, 0.3, 0.2, 0.2, 0.0, 0.2, 0.0, 0.0, 0.1, 0.0]


def test_leading_digits_approach_benford():
    rows = diagnostics.benford_table(2000)
    assert [r["digit"] for r in rows] == list(range(1, 10))
    assert max(abs(r["empirical"] - r["benford"]) for r in rows) < 0.01


def test_trailing_digit_distribution():
    assert diagnostics.trailing_digit_distribution(2) == [Fraction(1, 3), Fraction(2, 3)]
    tenth = diagnostics.trailing_digit_distribution(10)
    assert sum(tenth) == 1
    assert tenth == [Fraction(1, 15) if d % 2 == 0 else Fraction(2, 15) for d in range(10)]


def test_trailing_digits_match_streamed_terms():
    # 600 terms are ten Pisano periods mod 10
    counts = np.zeros(10, dtype=np.int64)
    a, b = 1, 1
    for _ in range(600):
        counts[a % 10] += 1
        a, b = b, a + b
    expected = diagnostics.trailing_digit_distribution(10)
    assert [Fraction(int(c), 600) for c in counts] == expected
    rows = diagnostics.trailing_table(10)
    assert rows[1] == {"digit": 1, "fraction": "2/15", "frequency": 2 / 15}


def brute_delta(digits, base, k):
    length = len(digits)
    counts = {}
    for i in range(length - k + 1):
        block = tuple(digits[i:i + k])
        counts[block] = counts.get(block, 0) + 1
    p = base ** -k
    worst = max(abs(c / length - p) for c in counts.values())
    return max(worst, p) if len(counts) < base ** k else worst


def test_term_delta_matches_block_enumeration():
    rng = np.random.default_rng(12345)
    for _ in range(1000):
        base = int(rng.integers(2, 17))
        k = int(rng.integers(1, 4))
        length = int(rng.integers(k, 60))
        digits = rng.integers(0, base, size=length).astype(np.uint8)
        digits[0] = max(int(digits[0]), 1)
        ds = digit_string(int("".join("0123456789abcdef"[d] for d in digits), base), base)
        assert diagnostics.term_delta(ds, k).delta == pytest.approx(brute_delta(bytes(digits), base, k))
