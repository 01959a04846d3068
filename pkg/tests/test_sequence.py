import bisect
import random

import pytest

from fibnormal.data.models import DigitString
from fibnormal.errors import InvalidInputError
from fibnormal.sequence import digits as digits_module
from fibnormal.sequence.arithmetic import divisors
from fibnormal.sequence.digits import digit_bytes, digit_string, from_digits
from fibnormal.sequence.fibonacci import (
    counting_function,
    criterion_conditions,
    digit_length,
    digit_length_predicted,
    fib_pair,
    fib_stream,
    initial_pair,
    pisano_period,
    total_digits,
)


def iterative_fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@pytest.mark.parametrize("n, expected", [(1, (1, 1)), (2, (1, 2)), (10, (55, 89))])
def test_fib_pair_small(n, expected):
    pair = fib_pair(n)
    assert (int(pair.f_n), int(pair.f_n1)) == expected


def test_fib_pair_matches_recurrence():
    for n in range(1, 300):
        pair = fib_pair(n)
        assert int(pair.f_n) == iterative_fib(n)
        assert int(pair.f_n1) == iterative_fib(n + 1)


def test_fib_pair_rejects_zero():
    with pytest.raises(InvalidInputError):
        fib_pair(0)


def test_fib_pair_advance_follows_recurrence():
    pair = fib_pair(20).advance()
    assert pair.n == 21
    assert int(pair.f_n) == iterative_fib(21)
    assert int(pair.f_n1) == iterative_fib(22)


def test_fib_stream_from_midpoint():
    values = [int(v) for v in fib_stream(fib_pair(5), 4)]
    assert values == [5, 8, 13, 21]


def test_fib_stream_from_start():
    assert [int(v) for v in fib_stream(initial_pair(), 7)] == [1, 1, 2, 3, 5, 8, 13]


def test_f500000_has_104494_decimal_digits():
    assert digit_length_predicted(500000, 10) == 104494


@pytest.mark.parametrize("base", [2, 3, 10, 16, 60])
def test_predicted_length_matches_conversion(base):
    for n in range(2, 250):
        assert digit_length_predicted(n, base) == digit_length(n, base), n


def test_predicted_length_domain():
    with pytest.raises(InvalidInputError):
        digit_length_predicted(1, 10)


def test_digit_string_basics():
    ds = digit_string(55, 10)
    assert ds.digits == b"\x05\x05"
    assert ds.leading_digit == 5 and ds.trailing_digit == 5
    assert digit_string(0, 7).digits == b"\x00"
    assert digit_string(258, 256).to_list() == [1, 2]
    assert digit_string(255, 16).label() == "ff"


def test_digit_string_rejects_leading_zero():
    with pytest.raises(InvalidInputError):
        DigitString(10, b"\x00\x01")


def test_digit_bytes_invalid_base():
    with pytest.raises(InvalidInputError):
        digit_bytes(10, 1)
    with pytest.raises(InvalidInputError):
        digit_bytes(10, 257)


def test_decimal_conversion_beyond_leaf_size():
    v = iterative_fib(12000)  # about 2500 digits, several recursion levels
    assert digits_module._decimal_string(v) == str(v)
    assert digit_bytes(v, 10) == bytes(int(c) for c in str(v))


def naive_digits(v, base):
    out = []
    while v:
        v, d = divmod(v, base)
        out.append(d)
    return bytes(reversed(out)) or b"\x00"


@pytest.mark.parametrize("base", [3, 7, 100, 255])
def test_generic_conversion_matches_naive(base):
    v = iterative_fib(9000)
    assert digits_module._generic_digits(v, base) == naive_digits(v, base)


@pytest.mark.parametrize("base", [2, 4, 8, 32, 256])
def test_power_of_two_conversion_matches_naive(base):
    v = iterative_fib(3000)
    assert digits_module._power_of_two_digits(v, base) == naive_digits(v, base)


def test_from_digits_inverts_large_decimal():
    v = iterative_fib(10000)
    assert from_digits(digit_string(v, 10)) == v


def test_counting_function_small_values():
    assert counting_function(0) == 0
    assert counting_function(1) == 2  # F_1 = F_2 = 1
    assert counting_function(2) == 3
    assert counting_function(100) == 11


def test_counting_function_matches_enumeration():
    for N in range(1, 2000):
        count, a, b = 0, 1, 1
        while a <= N:
            count += 1
            a, b = b, a + b
        assert counting_function(N) == count, N


def test_counting_function_rejects_negative():
    with pytest.raises(InvalidInputError):
        counting_function(-1)


@pytest.mark.parametrize("m, period", [(2, 3), (3, 8), (5, 20), (10, 60), (100, 300)])
def test_pisano_period(m, period):
    assert pisano_period(m) == period


def test_pisano_period_invalid_modulus():
    with pytest.raises(InvalidInputError):
        pisano_period(1)


@pytest.mark.parametrize("N, base, D", [(10, 10, 14), (100, 10, 1071), (10, 2, 34), (100, 2, 3442)])
def test_total_digits(N, base, D):
    assert total_digits(N, base) == D


def test_criterion_conditions_ratios():
    check = criterion_conditions(1000, 10)
    assert check.total_digits == 104750
    assert check.condition_i_ratio < 0.01
    assert 1.9 < check.condition_ii_ratio < 2.1
    assert check.asymptotic_total == pytest.approx(check.total_digits, rel=0.01)


def fib_mod(n, m):
    """(F_n mod m, F_{n+1} mod m) by fast doubling"""
    if n == 0:
        return 0, 1 % m
    a, b = fib_mod(n >> 1, m)
    c = a * (2 * b - a) % m
    d = (a * a + b * b) % m
    return (d, (c + d) % m) if n & 1 else (c, d)


def test_fibonacci_divisibility():
    values = [0] + [iterative_fib(n) for n in range(1, 301)]
    for d in range(1, 31):
        for k in range(1, 11):
            assert values[k * d] % values[d] == 0, (d, k)


@pytest.mark.slow
def test_pisano_period_is_minimal_return():
    for m in range(2, 1001):
        period = pisano_period(m)
        assert period <= 6 * m
        assert fib_mod(period, m) == (0, 1), m
        # return times are the multiples of the period, so checking its divisors suffices
        for d in divisors(period)[:-1]:
            assert fib_mod(d, m) != (0, 1), (m, d)


@pytest.mark.slow
@pytest.mark.parametrize("base", [2, 10])
def test_predicted_length_over_twenty_thousand_terms(base):
    for n, value in enumerate(fib_stream(initial_pair(), 20000), start=1):
        if n >= 2:
            assert digit_length_predicted(n, base) == len(digit_bytes(value, base)), n


@pytest.mark.slow
def test_fib_pair_matches_stream_to_ten_thousand():
    previous = None
    for n, value in enumerate(fib_stream(initial_pair(), 10001), start=1):
        if previous is not None:
            pair = fib_pair(n - 1)
            assert (int(pair.f_n), int(pair.f_n1)) == (int(previous), int(value)), n - 1
        previous = value


@pytest.mark.slow
def test_binary_trailing_digits_repeat_one_one_zero():
    for n, value in enumerate(fib_stream(initial_pair(), 10000), start=1):
        assert digit_string(value, 2).trailing_digit == (0 if n % 3 == 0 else 1), n


def test_counting_function_sampled_to_a_billion():
    fibs = [1, 1]
    while fibs[-1] <= 10 ** 9:
        fibs.append(fibs[-1] + fibs[-2])
    samples = {10 ** 9, 10 ** 9 - 1}
    for f in fibs:
        samples.update((f - 1, f, f + 1))
    rng = random.Random(1009)
    samples.update(rng.randrange(1, 10 ** 9 + 1) for _ in range(2000))
    for N in sorted(s for s in samples if 0 <= s <= 10 ** 9):
        assert counting_function(N) == bisect.bisect_right(fibs, N), N
