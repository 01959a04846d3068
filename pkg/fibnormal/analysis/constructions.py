"""
The ragged row-uniform counterexample and the σ/φ/λ range questions.
"""

import logging
from typing import List

import numpy as np

from fibnormal.data.models import (
    CounterexampleStats,
    RaggedColumn,
    ReachabilityFlags,
    SigmaCensusRow,
    SigmaWitness,
)
from fibnormal.engine.counters import CounterBank
from fibnormal.errors import CapacityError, InvalidInputError
from fibnormal.sequence.arithmetic import (
    FACTOR_LIMIT,
    carmichael_lambda,
    euler_phi,
    lambda_witness,
    phi_preimages,
    sigma,
    sigma_preimages,
)
from fibnormal.sequence.fibonacci import fib_stream, initial_pair

logger = logging.getLogger(__name__)

COLUMN_CHUNK_DIGITS = 1 << 22


def counterexample_stats(N: int) -> CounterexampleStats:
    """
    Stream the columns 1..N of the ragged array (column n is the digit
    n mod 10 repeated n times) and tally digits and 2-blocks.

    Every row of the array is a shift of 1,2,...,9,0 and so uniform, while
    the concatenated columns put almost all 2-block mass on the diagonal.
    """
    if not isinstance(N, int) or N < 1:
        raise InvalidInputError(f"the column count must be a positive integer, got {N}")
    bank = CounterBank(10, 2)
    pending, size = [], 0
    for n in range(1, N + 1):
        column = RaggedColumn(n).digits()
        pending.append(column)
        size += len(column)
        if size >= COLUMN_CHUNK_DIGITS or n == N:
            bank.absorb(pending)
            pending, size = [], 0

    L = N * (N + 1) // 2
    assert bank.D == L
    pairs = bank.blocks[1]
    diagonal = np.array([int(pairs[11 * d]) for d in range(10)], dtype=np.int64)
    windows = L - 1
    off_diagonal = int(pairs.sum(dtype=np.uint64)) - int(diagonal.sum())
    return CounterexampleStats(
        N=N,
        L_N=L,
        single_freqs=[int(c) / L for c in bank.single],
        diagonal_masses=[int(c) / windows if windows else 0.0 for c in diagonal],
        off_diagonal_count=off_diagonal,
        off_diagonal_bound=N - 1,
    )


def row_sequence(k: int, count: int) -> List[int]:
    """Row k of the ragged array: t_n = n mod 10 for n = k+1, k+2, ..."""
    if k < 0 or count < 0:
        raise InvalidInputError("row depth and length must be non-negative")
    return [n % 10 for n in range(k + 1, k + 1 + count)]


def sigma_range_contains(v) -> SigmaWitness:
    """
    Whether v = σ(m) for some m, with the smallest such m.

    The preimages are enumerated from the divisors of v, each divisor d
    giving the prime powers p^a with σ(p^a) = d; this finds the same
    smallest witness as scanning m = 1..v-1.
    """
    v = int(v)
    preimages = sigma_preimages(v)
    if not preimages:
        return SigmaWitness(value=v, in_range=False)
    witness = preimages[0]
    if sigma(witness) != v:
        raise AssertionError(f"σ({witness}) != {v}")
    return SigmaWitness(value=v, in_range=True, witness=witness)


def fib_sigma_census(max_index: int, value_cap: int = FACTOR_LIMIT) -> List[SigmaCensusRow]:
    """
    σ-range membership of F_1..F_max_index.

    Beyond n = 6 every hit found so far is a multiple of 6; a hit whose
    value is not is flagged as an exception.
    """
    if not isinstance(max_index, int) or max_index < 1:
        raise InvalidInputError(f"max_index must be a positive integer, got {max_index}")
    if not isinstance(value_cap, int) or value_cap < 1:
        raise InvalidInputError(f"value_cap must be a positive integer, got {value_cap}")
    if value_cap > FACTOR_LIMIT:
        raise CapacityError(f"value cap {value_cap} exceeds the trial-division bound {FACTOR_LIMIT}")

    rows = []
    for n, value in enumerate(fib_stream(initial_pair(), max_index), start=1):
        value = int(value)
        if value > value_cap:
            raise CapacityError(f"F_{n} = {value} exceeds the value cap {value_cap}")
        found = sigma_range_contains(value)
        rows.append(SigmaCensusRow(
            n=n,
            fib=value,
            witness=found,
            index_multiple_of_6=n % 6 == 0,
            value_multiple_of_6=value % 6 == 0,
            exception=found.in_range and n > 6 and value % 6 != 0,
        ))
    hits = sum(r.witness.in_range for r in rows)
    logger.info("σ census to n=%d: %d hits, %d exceptions", max_index, hits, sum(r.exception for r in rows))
    return rows


def reachability_phi_lambda(v) -> ReachabilityFlags:
    """
    Whether v is a value of Euler's φ and of Carmichael's λ.

    Both functions are even from 3 on and equal 1 at 1 and 2, so an odd
    v > 1 is out of range for both without any search.
    """
    v = int(v)
    if v < 1:
        raise InvalidInputError(f"v must be at least 1, got {v}")
    if v > 1 and v % 2:
        return ReachabilityFlags(value=v, phi=False, phi_witness=None, carmichael=False,
                                 carmichael_witness=None)
    if v > FACTOR_LIMIT:
        raise CapacityError(f"{v} exceeds the search bound {FACTOR_LIMIT}")
    phi = phi_preimages(v)
    phi_witness = phi[0] if phi else None
    lam = lambda_witness(v)
    if phi_witness is not None and euler_phi(phi_witness) != v:
        raise AssertionError(f"φ({phi_witness}) != {v}")
    if lam is not None and carmichael_lambda(lam) != v:
        raise AssertionError(f"λ({lam}) != {v}")
    return ReachabilityFlags(value=v, phi=phi_witness is not None, phi_witness=phi_witness,
                             carmichael=lam is not None, carmichael_witness=lam)
