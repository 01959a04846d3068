from collections import Counter

import pytest

from fibnormal.analysis import constructions
from fibnormal.errors import CapacityError, InvalidInputError
from fibnormal.sequence.arithmetic import sigma


def test_counterexample_small():
    stats = constructions.counterexample_stats(100)
    assert stats.L_N == 5050
    assert stats.off_diagonal_count == stats.off_diagonal_bound == 99
    # digit 0 fills columns 10, 20, ..., 100
    assert stats.single_freqs[0] == pytest.approx(550 / 5050)
    assert stats.single_freqs[1] == pytest.approx(460 / 5050)
    assert stats.max_single_deviation <= stats.frequency_bound
    assert sum(stats.diagonal_masses) == pytest.approx(1 - 99 / 5049)


@pytest.mark.parametrize("N", [1, 9, 10, 11, 1000])
def test_counterexample_off_diagonal_is_exactly_n_minus_one(N):
    assert constructions.counterexample_stats(N).off_diagonal_count == N - 1


def test_counterexample_shrinks_with_n():
    small = constructions.counterexample_stats(100)
    large = constructions.counterexample_stats(2000)
    assert large.max_single_deviation < small.max_single_deviation
    assert large.max_diagonal_deviation < small.max_diagonal_deviation
    # all 2-block mass sits on the ten diagonal cells
    assert sum(large.diagonal_masses) > 0.999


def test_counterexample_rejects_bad_n():
    with pytest.raises(InvalidInputError):
        constructions.counterexample_stats(0)


def test_rows_are_uniform():
    assert constructions.row_sequence(0, 12) == [1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1, 2]
    assert constructions.row_sequence(3, 3) == [4, 5, 6]
    for k in (0, 5, 17):
        assert set(Counter(constructions.row_sequence(k, 1000)).values()) == {100}
    with pytest.raises(InvalidInputError):
        constructions.row_sequence(-1, 5)


@pytest.mark.parametrize("v, in_range, witness", [
    (8, True, 7), (5, False, None), (1, True, 1), (12, True, 6), (2, False, None), (3, True, 2),
])
def test_sigma_range_contains(v, in_range, witness):
    found = constructions.sigma_range_contains(v)
    assert (found.in_range, found.witness) == (in_range, witness)


def test_sigma_witness_is_smallest_preimage():
    for v in range(1, 300):
        found = constructions.sigma_range_contains(v)
        scan = next((m for m in range(1, v + 1) if sigma(m) == v), None)
        assert found.witness == scan, v


def test_fib_sigma_census():
    rows = constructions.fib_sigma_census(40, 10 ** 9)
    assert len(rows) == 40
    by_index = {r.n: r for r in rows}
    assert by_index[6].witness.in_range and by_index[6].witness.witness == 7
    for n in (5, 11, 13):
        assert not by_index[n].witness.in_range
    for r in rows:
        if r.witness.in_range:
            assert sigma(r.witness.witness) == r.fib
        if r.n > 6 and r.witness.in_range:
            assert r.value_multiple_of_6 or r.exception
    assert by_index[12].fib == 144 and by_index[12].value_multiple_of_6


def test_f25_is_not_a_sigma_value():
    assert not constructions.sigma_range_contains(75025).in_range


def test_fib_sigma_census_capacity():
    with pytest.raises(CapacityError):
        constructions.fib_sigma_census(40, 10 ** 6)
    with pytest.raises(CapacityError):
        constructions.fib_sigma_census(10, 10 ** 13)
    with pytest.raises(InvalidInputError):
        constructions.fib_sigma_census(0)


@pytest.mark.parametrize("v, phi, lam", [
    (1, True, True), (4, True, True), (5, False, False), (14, False, False), (26, False, False),
    (89, False, False), (144, True, True),
])
def test_reachability(v, phi, lam):
    flags = constructions.reachability_phi_lambda(v)
    assert (flags.phi, flags.carmichael) == (phi, lam)
    if phi:
        assert flags.phi_witness is not None
    if lam:
        assert flags.carmichael_witness is not None


def test_counterexample_ten_thousand_columns():
    stats = constructions.counterexample_stats(10000)
    assert stats.off_diagonal_count == 9999
    assert max(abs(f - 0.1) for f in stats.single_freqs) < 2.1e-4
    assert max(abs(f - 0.1) for f in stats.diagonal_masses) < 2.1e-4
