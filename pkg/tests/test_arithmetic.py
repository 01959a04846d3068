import math

import pytest

from fibnormal.errors import CapacityError, InvalidInputError
from fibnormal.sequence.arithmetic import (
    FACTOR_LIMIT,
    carmichael_lambda,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    lambda_witness,
    phi_preimages,
    sigma,
    sigma_preimages,
)


def brute_phi(m):
    return sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)


def brute_lambda(m):
    units = [a for a in range(1, m + 1) if math.gcd(a, m) == 1]
    e = 1
    while any(pow(a, e, m) != 1 % m for a in units):
        e += 1
    return e


def test_factorize_and_divisors():
    assert factorize(1) == {}
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(2 ** 40) == {2: 40}
    assert factorize(999983 * 999979) == {999979: 1, 999983: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_is_prime_matches_trial_division():
    for n in range(2000):
        expected = n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))
        assert is_prime(n) == expected, n
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 61 + 1)


@pytest.mark.parametrize("n, s, phi, lam", [
    (1, 1, 1, 1), (7, 8, 6, 6), (8, 15, 4, 2), (12, 28, 4, 2), (16, 31, 8, 4), (35, 48, 24, 12),
])
def test_known_values(n, s, phi, lam):
    assert sigma(n) == s
    assert euler_phi(n) == phi
    assert carmichael_lambda(n) == lam


def test_lambda_and_phi_match_definitions():
    for m in range(1, 300):
        assert euler_phi(m) == brute_phi(m), m
        assert carmichael_lambda(m) == brute_lambda(m), m


def test_against_sympy():
    sympy = pytest.importorskip("sympy")
    for n in list(range(1, 500)) + [10 ** 9 + 7, 2 ** 31 - 2, 600851475143]:
        assert sigma(n) == sympy.divisor_sigma(n)
        assert euler_phi(n) == sympy.totient(n)
        assert carmichael_lambda(n) == sympy.reduced_totient(n)


def test_sigma_preimages_match_scan():
    table = {}
    for m in range(1, 400):
        table.setdefault(sigma(m), []).append(m)
    for v in range(1, 400):
        assert sigma_preimages(v) == table.get(v, []), v


def test_sigma_preimages_examples():
    assert sigma_preimages(12) == [6, 11]
    assert sigma_preimages(8) == [7]
    assert sigma_preimages(5) == []
    assert sigma_preimages(1) == [1]


def test_phi_preimages_match_scan():
    # φ(m) >= sqrt(m/2), so every preimage of v <= 40 is below 2·40²
    phis = {m: euler_phi(m) for m in range(1, 2 * 40 * 40 + 1)}
    for v in range(1, 41):
        expected = [m for m, phi in phis.items() if phi == v]
        assert phi_preimages(v) == expected, v


def test_phi_preimages_examples():
    assert phi_preimages(1) == [1, 2]
    assert phi_preimages(2) == [3, 4, 6]
    assert phi_preimages(4) == [5, 8, 10, 12]
    assert phi_preimages(14) == []


def test_lambda_witness_matches_scan():
    values = {carmichael_lambda(m) for m in range(1, 5000)}
    for v in range(1, 31):
        witness = lambda_witness(v)
        if v in values:
            assert witness is not None and carmichael_lambda(witness) == v, v
        else:
            assert witness is None, v
    assert lambda_witness(14) is None and lambda_witness(26) is None


def test_capacity_and_domain():
    with pytest.raises(CapacityError):
        factorize(FACTOR_LIMIT + 1)
    with pytest.raises(CapacityError):
        sigma_preimages(FACTOR_LIMIT * 2)
    with pytest.raises(InvalidInputError):
        euler_phi(0)
    with pytest.raises(InvalidInputError):
        phi_preimages(-4)


def test_phi_and_lambda_are_even_above_two():
    for m in range(3, 10001):
        assert euler_phi(m) % 2 == 0, m
        assert carmichael_lambda(m) % 2 == 0, m
        assert euler_phi(m) % carmichael_lambda(m) == 0, m
