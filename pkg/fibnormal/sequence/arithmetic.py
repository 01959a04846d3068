"""
Classical multiplicative functions σ, φ, λ by trial division, and the
divisor-driven preimage searches built on them.
"""

import math
from functools import reduce
from typing import Dict, List, Optional, Tuple

from fibnormal.errors import CapacityError, InvalidInputError

# Desk-scale contract: trial division is only promised up to here
FACTOR_LIMIT = 10 ** 12


def _positive(n, name: str) -> int:
    n = int(n)
    if n < 1:
        raise InvalidInputError(f"{name} is defined for n >= 1, got {n}")
    if n > FACTOR_LIMIT:
        raise CapacityError(f"{name}({n}) exceeds the trial-division bound {FACTOR_LIMIT}")
    return n


def factorize(n) -> Dict[int, int]:
    """Prime factorization {p: exponent} by trial division"""
    n = _positive(n, "factorize")
    factors: Dict[int, int] = {}
    if n & 1 == 0:
        shift = (n & -n).bit_length() - 1
        factors[2] = shift
        n >>= shift
    d = 3
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors[d] = e
        d += 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


# Deterministic Miller-Rabin witnesses for n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def divisors(n) -> List[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return sorted(divs)


def sigma(n) -> int:
    """Sum of the positive divisors of n"""
    product = 1
    for p, e in factorize(n).items():
        product *= (p ** (e + 1) - 1) // (p - 1)
    return product


def euler_phi(n) -> int:
    out = _positive(n, "euler_phi")
    for p in factorize(out):
        out //= p
        out *= p - 1
    return out


def _lambda_prime_power(p: int, e: int) -> int:
    if p == 2 and e >= 3:
        return 2 ** (e - 2)
    return p ** (e - 1) * (p - 1)


def carmichael_lambda(n) -> int:
    """Exponent of the multiplicative group modulo n"""
    factors = factorize(n)
    return reduce(math.lcm, (_lambda_prime_power(p, e) for p, e in factors.items()), 1)


def _iroot(x: int, a: int) -> int:
    """⌊x^(1/a)⌋ for x >= 0"""
    r = int(round(x ** (1.0 / a)))
    while r ** a > x:
        r -= 1
    while (r + 1) ** a <= x:
        r += 1
    return r


def _sigma_prime_powers(d: int) -> List[Tuple[int, int]]:
    """All prime powers p^a (a >= 1) with σ(p^a) = d"""
    found = []
    if d >= 3 and is_prime(d - 1):
        found.append((d - 1, 1))
    a = 2
    while 2 ** (a + 1) - 1 <= d:
        # p^a < σ(p^a) < (p+1)^a pins p to ⌊d^(1/a)⌋
        p = _iroot(d, a)
        if p >= 2 and (p ** (a + 1) - 1) // (p - 1) == d and is_prime(p):
            found.append((p, a))
        a += 1
    return found


def sigma_preimages(v) -> List[int]:
    """Every m with σ(m) = v, ascending"""
    v = _positive(v, "sigma_preimages")
    divs = divisors(v)
    candidates = {d: _sigma_prime_powers(d) for d in divs[1:]}
    candidates = {d: c for d, c in candidates.items() if c}
    results: List[int] = []

    # primes strictly increase along a branch, so each m is produced once
    def search(rest: int, min_prime: int, m: int) -> None:
        if rest == 1:
            results.append(m)
            return
        for d, powers in candidates.items():
            if rest % d:
                continue
            for p, a in powers:
                if p > min_prime:
                    search(rest // d, p, m * p ** a)

    search(v, 1, 1)
    return sorted(results)


def phi_preimages(v) -> List[int]:
    """Every m with φ(m) = v, ascending"""
    v = _positive(v, "phi_preimages")
    if v > 1 and v % 2:
        return []
    primes = sorted((d + 1 for d in divisors(v) if is_prime(d + 1)), reverse=True)
    results: List[int] = []

    # largest prime first; each branch only uses smaller primes
    def search(rest: int, index: int, m: int) -> None:
        if rest == 1:
            results.append(m)
            if m % 2 == 1:
                results.append(2 * m)
            return
        for i in range(index, len(primes)):
            p = primes[i]
            if p == 2 and rest > 1 and rest & (rest - 1):
                continue
            if rest % (p - 1):
                continue
            q = rest // (p - 1)
            power = p
            while True:
                search(q, i + 1, m * power)
                if q % p:
                    break
                q //= p
                power *= p

    search(v, 0, 1)
    return sorted(set(results))


def lambda_witness(v) -> Optional[int]:
    """
    Some m with λ(m) = v, or None.

    The largest m with λ(m) | v is the product M of the maximal prime powers
    q with λ(q) | v; a preimage exists exactly when λ(M) = v. The witness
    is then shrunk greedily while λ stays equal to v.
    """
    v = _positive(v, "lambda_witness")
    if v == 1:
        return 1
    if v % 2:
        return None
    powers: Dict[int, int] = {}
    for d in divisors(v):
        p = d + 1
        if not is_prime(p):
            continue
        e = 1
        while _lambda_prime_power(p, e + 1) and v % _lambda_prime_power(p, e + 1) == 0:
            e += 1
        powers[p] = max(powers.get(p, 0), e)

    def lam(pw: Dict[int, int]) -> int:
        return reduce(math.lcm, (_lambda_prime_power(p, e) for p, e in pw.items() if e), 1)

    if lam(powers) != v:
        return None
    for p in sorted(powers, reverse=True):
        while powers[p] > 0:
            powers[p] -= 1
            if lam(powers) != v:
                powers[p] += 1
                break
    return reduce(lambda acc, item: acc * item[0] ** item[1], powers.items(), 1)
