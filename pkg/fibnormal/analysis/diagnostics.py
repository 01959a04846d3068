"""
Per-term normality diagnostics and structural baselines.

term_delta and census measure how far each individual F_n is from
(ε,k)-normal; the baselines describe what an iid uniform string, Benford's
law and Pisano periodicity predict for leading, trailing and typical digits.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence

import numpy as np

from fibnormal.data.models import BaselineRatio, CensusRow, DigitString, TermDelta
from fibnormal.engine.stream import partition_bounds
from fibnormal.errors import InvalidInputError
from fibnormal.sequence.digits import check_base, digit_bytes
from fibnormal.sequence.fibonacci import fib_pair, fib_stream, pisano_period

logger = logging.getLogger(__name__)

DEFAULT_EPSILONS = (0.05, 0.02, 0.01, 0.005, 0.002)
CENSUS_MIN_LENGTH = 10
RATIO_MIN_LENGTH = 200
MONTE_CARLO_TRIALS = 10 ** 6
MONTE_CARLO_SEED = 20240601
_MC_BATCH = 50_000


def _delta(digits: bytes, base: int, k: int) -> float:
    length = len(digits)
    buf = np.frombuffer(digits, dtype=np.uint8)
    codes = buf.astype(np.int64)
    for j in range(1, k):
        codes = codes[:-1] * base + buf[j:]
    _, counts = np.unique(codes, return_counts=True)
    p = float(base) ** -k
    delta = float(np.max(np.abs(counts / length - p)))
    if counts.size < base ** k:
        # unseen blocks deviate by exactly b^-k
        delta = max(delta, p)
    return delta


def term_delta(digits: DigitString, k: int, n: int = 0) -> TermDelta:
    """
    δ = max_w |N(w)/L - b^-k| over all b^k blocks w, L the digit length

    Args:
        digits: The digit string of one term
        k: Block length
        n: Index of the term, carried into the result
    """
    if k < 1:
        raise InvalidInputError(f"block length must be at least 1, got {k}")
    if len(digits) < k:
        raise InvalidInputError(f"a string of {len(digits)} digits has no {k}-blocks")
    return TermDelta(n=n, digit_length=len(digits), k=k, delta=_delta(digits.digits, digits.base, k))


def _scan(base: int, first: int, last: int, k: int) -> List[TermDelta]:
    rows = []
    for n, value in enumerate(fib_stream(fib_pair(first), last - first + 1), start=first):
        digits = digit_bytes(value, base)
        if len(digits) >= k:
            rows.append(TermDelta(n=n, digit_length=len(digits), k=k, delta=_delta(digits, base, k)))
    return rows


def _scan_worker(args) -> List[TermDelta]:
    return _scan(*args)


def per_term_deltas(base: int, N: int, k: int = 1, partitions: int = 1) -> List[TermDelta]:
    """
    TermDelta for every F_n, n <= N, with at least k digits

    Partitioned scans recompute the starting pair of each range by fast
    doubling and run in a process pool; the result is in index order.
    """
    check_base(base)
    if k < 1:
        raise InvalidInputError(f"block length must be at least 1, got {k}")
    bounds = partition_bounds(N, partitions)
    if len(bounds) == 1:
        return _scan(base, 1, N, k)
    jobs = [(base, first, last, k) for first, last in bounds]
    logger.info("scanning %d terms in %d partitions", N, len(jobs))
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        parts = list(pool.map(_scan_worker, jobs))
    return [row for part in parts for row in part]


def census(deltas: Iterable[TermDelta], epsilons: Sequence[float] = DEFAULT_EPSILONS,
           min_length: int = CENSUS_MIN_LENGTH) -> List[CensusRow]:
    """
    For each ε, how many qualifying terms (digit length >= min_length)
    have δ > ε, and what fraction of the qualifying terms that is
    """
    if any(eps <= 0 for eps in epsilons):
        raise InvalidInputError("census thresholds must be positive")
    values = np.array([d.delta for d in deltas if d.digit_length >= min_length], dtype=np.float64)
    rows = []
    for eps in epsilons:
        count = int(np.count_nonzero(values > eps))
        rows.append(CensusRow(epsilon=eps, count=count,
                              fraction=count / values.size if values.size else 0.0))
    return rows


@lru_cache(maxsize=1024)
def _monte_carlo_max_dev(K: int, base: int, trials: int, seed: int) -> float:
    logger.debug("Monte Carlo baseline for K=%d in base %d (%d trials)", K, base, trials)
    rng = np.random.default_rng(seed)
    p = np.full(base, 1.0 / base)
    total, done = 0.0, 0
    while done < trials:
        batch = min(_MC_BATCH, trials - done)
        counts = rng.multinomial(K, p, size=batch)
        total += float(np.abs(counts / K - 1.0 / base).max(axis=1).sum())
        done += batch
    return total / trials


def iid_max_dev_baseline(K: int, base: int, trials: int = MONTE_CARLO_TRIALS,
                         seed: int = MONTE_CARLO_SEED) -> float:
    """
    Expected max_d |C_d/K - 1/b| for K iid uniform digits.

    Base 10 uses 1.86·sqrt(0.09/K), which ignores the weak negative
    correlation between digit counts. Base 2 has the exact limit
    E|Z|/(2 sqrt K) = sqrt(2/π)/(2 sqrt K). Other bases are estimated by a
    seeded Monte Carlo over multinomial draws.
    """
    check_base(base)
    if K < 1:
        raise InvalidInputError(f"the digit count K must be at least 1, got {K}")
    if base == 10:
        return 1.86 * math.sqrt(0.09 / K)
    if base == 2:
        return math.sqrt(2 / math.pi) / (2 * math.sqrt(K))
    return _monte_carlo_max_dev(K, base, trials, seed)


def baseline_ratio_summary(deltas: Iterable[TermDelta], base: int,
                           min_length: int = RATIO_MIN_LENGTH, **baseline_options) -> BaselineRatio:
    """Mean and standard deviation of δ_{n,1} / iid baseline over long terms"""
    ratios = [d.delta / iid_max_dev_baseline(d.digit_length, base, **baseline_options)
              for d in deltas if d.k == 1 and d.digit_length >= min_length]
    if not ratios:
        return BaselineRatio(base=base, min_length=min_length, terms=0, mean=float("nan"), std=float("nan"))
    arr = np.array(ratios)
    return BaselineRatio(base=base, min_length=min_length, terms=arr.size,
                         mean=float(arr.mean()), std=float(arr.std()))


def benford_freq(d: int, base: int = 10) -> float:
    """log_b(1 + 1/d), the Benford probability of leading digit d"""
    check_base(base)
    if not 1 <= d < base:
        raise InvalidInputError(f"invalid leading digit {d} for base {base}")
    return math.log1p(1 / d) / math.log(base)


def trailing_digit_distribution(base: int) -> List[Fraction]:
    """Exact frequency of each residue of F_n mod base over n = 1..π(base)"""
    check_base(base)
    period = pisano_period(base)
    counts = [0] * base
    a, b = 1, 1
    for _ in range(period):
        counts[a] += 1
        a, b = b, (a + b) % base
    return [Fraction(c, period) for c in counts]


def leading_digit_empirical(N: int, base: int = 10) -> np.ndarray:
    """
    Leading-digit frequencies of F_1..F_N, indexed by digit.

    A running power p = b^(L-1) tracks the digit length, so each leading
    digit is one short division F_n // p.
    """
    check_base(base)
    if N < 1:
        raise InvalidInputError(f"N must be at least 1, got {N}")
    counts = np.zeros(base, dtype=np.int64)
    power = 1
    for value in fib_stream(fib_pair(1), N):
        while value >= power * base:
            power *= base
        counts[int(value // power)] += 1
    return counts / N


def benford_table(N: int, base: int = 10) -> List[Dict[str, float]]:
    """Empirical leading digits of F_1..F_N next to Benford's law"""
    empirical = leading_digit_empirical(N, base)
    return [{"digit": d, "empirical": float(empirical[d]), "benford": benford_freq(d, base)}
            for d in range(1, base)]


def trailing_table(base: int) -> List[Dict[str, object]]:
    """Pisano trailing-digit distribution as report rows"""
    return [{"digit": d, "fraction": str(f), "frequency": float(f)}
            for d, f in enumerate(trailing_digit_distribution(base))]
