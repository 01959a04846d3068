"""
Exact Fibonacci generation and the closed forms attached to it
"""

import logging
from typing import Iterator

import mpmath

from fibnormal.data.models import FibPair, CriterionCheck
from fibnormal.errors import InvalidInputError
from fibnormal.sequence import backend
from fibnormal.sequence.digits import check_base, digit_bytes

logger = logging.getLogger(__name__)

# A floor argument closer than this to an integer is settled exactly
BOUNDARY_GUARD = mpmath.mpf("1e-9")
GUARD_DIGITS = 40


def fib_pair(n: int) -> FibPair:
    """
    Return (F_n, F_{n+1}) by fast doubling:

        F(2k)   = F(k) * (2F(k+1) - F(k))
        F(2k+1) = F(k)^2 + F(k+1)^2
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"fib_pair needs n >= 1, got {n}")
    a, b = backend.MPZ_ZERO, backend.MPZ_ONE  # (F_0, F_1)
    for bit in bin(n)[2:]:
        c = a * (2 * b - a)
        d = a * a + b * b
        if bit == "1":
            a, b = d, c + d
        else:
            a, b = c, d
    return FibPair(n, a, b)


def fib_stream(start: FibPair, count: int) -> Iterator:
    """Yield F_{start.n}, F_{start.n+1}, ... (count values), one addition each"""
    a, b = start.f_n, start.f_n1
    for _ in range(count):
        yield a
        a, b = b, a + b


def initial_pair() -> FibPair:
    return FibPair(1, backend.MPZ_ONE, backend.MPZ_ONE)


def digit_length(n: int, base: int) -> int:
    """Exact digit count of F_n, by conversion"""
    return len(digit_bytes(fib_pair(n).f_n, base))


def _log_fib(n: int, base: int):
    """
    log_base(F_n) in extended precision.

    n·log_b φ − log_b √5 plus the Binet correction log_b(1 − (−1)^n φ^(−2n)),
    which only matters for small n but keeps exact powers of the base
    (F_3 = 2 in base 2) on the integer they belong to.
    """
    phi = (1 + mpmath.sqrt(5)) / 2
    correction = 1 - (-1) ** n * phi ** (-2 * n)
    return (n * mpmath.log(phi) - mpmath.log(mpmath.sqrt(5)) + mpmath.log(correction)) / mpmath.log(base)


def digit_length_predicted(n: int, base: int) -> int:
    """
    ⌊n·log_b φ − log_b √5⌋ + 1, the digit count of F_n in base b.

    Defined for n >= 2 only: the closed form yields 0 at n = 1.
    """
    check_base(base)
    if n < 2:
        raise InvalidInputError(f"digit_length_predicted is defined for n >= 2, got {n}")
    with mpmath.workdps(len(str(n)) + GUARD_DIGITS):
        x = _log_fib(n, base)
        floor = int(mpmath.floor(x))
        frac = x - floor
        if frac < BOUNDARY_GUARD or 1 - frac < BOUNDARY_GUARD:
            logger.debug("digit length of F_%d in base %d near a boundary; converting", n, base)
            return digit_length(n, base)
    return floor + 1


def counting_function(N) -> int:
    """
    Φ_F(N) = #{n >= 1 : F_n <= N} = ⌊log(√5 (N + 1/2)) / log φ⌋.

    F_1 and F_2 are both counted.
    """
    N = int(N)
    if N < 0:
        raise InvalidInputError(f"counting_function needs N >= 0, got {N}")
    if N == 0:
        return 0
    with mpmath.workdps(len(str(N)) + GUARD_DIGITS):
        phi = (1 + mpmath.sqrt(5)) / 2
        x = mpmath.log(mpmath.sqrt(5) * (mpmath.mpf(N) + mpmath.mpf(1) / 2)) / mpmath.log(phi)
        floor = int(mpmath.floor(x))
        frac = x - floor
        if frac < BOUNDARY_GUARD or 1 - frac < BOUNDARY_GUARD:
            return _count_by_enumeration(N)
    return floor


def _count_by_enumeration(N: int) -> int:
    count, a, b = 0, 1, 1
    while a <= N:
        count += 1
        a, b = b, a + b
    return count


def pisano_period(m: int) -> int:
    """Period of the Fibonacci sequence modulo m"""
    if not isinstance(m, int) or m < 2:
        raise InvalidInputError(f"invalid modulus {m}: must be at least 2")
    a, b = 0, 1
    # Wall: π(m) <= 6m
    for i in range(1, 6 * m + 1):
        a, b = b, (a + b) % m
        if a == 0 and b == 1:
            return i
    raise AssertionError(f"no Pisano period found for m={m}")


def total_digits(N: int, base: int) -> int:
    """D(N) = Σ_{n<=N} |σ_b(F_n)| from the closed-form lengths"""
    if N < 1:
        return 0
    return 1 + sum(digit_length_predicted(n, base) for n in range(2, N + 1))


def criterion_conditions(m: int, base: int) -> CriterionCheck:
    """
    Growth conditions of the concatenation criterion at prefix length m.

    Condition (i) asks m = o(Σ|σ_b(F_n)|); condition (ii) asks
    m·max|σ_b(F_n)| = O(Σ|σ_b(F_n)|). Both ratios are reported; the
    first tends to 0 and the second to 2.
    """
    check_base(base)
    if m < 1:
        raise InvalidInputError(f"criterion_conditions needs m >= 1, got {m}")
    total = total_digits(m, base)
    max_length = 1 if m == 1 else digit_length_predicted(m, base)
    log_phi = float(mpmath.log((1 + mpmath.sqrt(5)) / 2) / mpmath.log(base))
    return CriterionCheck(
        m=m,
        base=base,
        total_digits=total,
        asymptotic_total=0.5 * m * m * log_phi,
        max_length=max_length,
        condition_i_ratio=m / total,
        condition_ii_ratio=m * max_length / total,
    )
