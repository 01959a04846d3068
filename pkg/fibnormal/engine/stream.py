"""
Streaming analysis of the concatenation F_1 F_2 F_3 ... in a given base.

Each F_n is converted to digits once and handed to a CounterBank in chunks
of whole terms; the concatenation itself is never stored. Runs can be
checkpointed at term boundaries or split into contiguous partitions that
run in separate processes and are merged back in order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, Set, Tuple

from fibnormal.checkpoint import checkpoint_manager
from fibnormal.data.models import FibCursor, FibPair
from fibnormal.engine.counters import CounterBank, check_capacity, merge_all
from fibnormal.errors import InvalidInputError
from fibnormal.sequence import backend
from fibnormal.sequence.digits import check_base, digit_bytes
from fibnormal.sequence.fibonacci import fib_pair, initial_pair
from fibnormal.utils.progress import ProgressTracker

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_DIGITS = 1 << 22

SnapshotCallback = Callable[[int, CounterBank], None]


def _check_terms(N) -> None:
    if not isinstance(N, int) or N < 1:
        raise InvalidInputError(f"the term count N must be a positive integer, got {N}")


def _consume(bank: CounterBank, start: FibPair, last_term: int, chunk_digits: int,
             stops: Set[int], on_stop: Optional[Callable[[int, FibPair], None]] = None,
             progress: Optional[ProgressTracker] = None) -> None:
    """
    Feed terms start.n..last_term into the bank.

    Pending terms are flushed when they reach chunk_digits, and always after
    a term listed in `stops`, where on_stop sees the bank and the pair of the
    next term.
    """
    base = bank.base
    a, b = start.f_n, start.f_n1
    pending: List[bytes] = []
    pending_digits = 0
    for n in range(start.n, last_term + 1):
        digits = digit_bytes(a, base)
        pending.append(digits)
        pending_digits += len(digits)
        a, b = b, a + b
        if pending_digits >= chunk_digits or n in stops or n == last_term:
            bank.absorb(pending)
            pending, pending_digits = [], 0
            if progress is not None:
                progress.update(bank.last_term, bank.D, force=n == last_term)
            if on_stop is not None and n in stops:
                on_stop(n, FibPair(n + 1, a, b))


def stream_analyze(base: int, N: int, k_max: int = 4, positional: bool = False,
                   checkpoint_policy: Optional["checkpoint_manager.CheckpointPolicy"] = None,
                   partitions: int = 1, chunk_digits: int = DEFAULT_CHUNK_DIGITS,
                   snapshots: Iterable[int] = (), on_snapshot: Optional[SnapshotCallback] = None,
                   progress: Optional[ProgressTracker] = None) -> CounterBank:
    """
    Count digits and k-blocks of the first D(N) digits of the concatenation

    Args:
        base: Radix, 2..256
        N: Number of Fibonacci terms
        k_max: Longest block length counted
        positional: Also split block counts into leading/trailing/middle/boundary
        checkpoint_policy: Save (and optionally resume) state at term boundaries
        partitions: Number of processes; partitioned runs merge to the sequential result
        chunk_digits: Digits buffered before the counters are updated
        snapshots: Term counts at which on_snapshot sees the bank so far
        on_snapshot: Callback receiving (N_i, bank) at every snapshot

    Returns:
        CounterBank over terms 1..N
    """
    check_base(base)
    _check_terms(N)
    check_capacity(base, k_max)
    if not isinstance(partitions, int) or partitions < 1:
        raise InvalidInputError(f"partitions must be a positive integer, got {partitions}")
    snapshot_set = {s for s in snapshots if 1 <= s <= N}

    if partitions > 1:
        if checkpoint_policy is not None or snapshot_set:
            raise InvalidInputError("checkpoints and snapshots need a sequential run (partitions=1)")
        return stream_partitioned(base, N, k_max, positional, partitions, chunk_digits)

    bank = CounterBank(base, k_max, positional)
    start = initial_pair()
    if checkpoint_policy is not None:
        resumed = checkpoint_manager.load_compatible(checkpoint_policy, base, k_max, positional)
        if resumed is not None:
            cursor, bank = resumed
            if cursor.terms_done > N:
                raise InvalidInputError(
                    f"checkpoint {checkpoint_policy.path} already covers {cursor.terms_done} terms, "
                    f"more than the requested {N}")
            start = cursor.pair
            logger.info("resuming at term %d with %d digits counted", cursor.n, bank.D)

    stops = set(snapshot_set)
    if checkpoint_policy is not None:
        if checkpoint_policy.every_terms > 0:
            stops.update(range(checkpoint_policy.every_terms, N + 1, checkpoint_policy.every_terms))
        stops.add(N)

    def on_stop(n: int, next_pair: FibPair) -> None:
        if on_snapshot is not None and n in snapshot_set:
            on_snapshot(n, bank)
        if checkpoint_policy is not None and (checkpoint_policy.due(n) or n == N):
            cursor = FibCursor(base=base, n=n + 1, pair=next_pair, suffix_carry=bank.suffix)
            checkpoint_manager.checkpoint_save(cursor, bank, checkpoint_policy.path)

    if start.n <= N:
        _consume(bank, start, N, chunk_digits, stops, on_stop, progress)
    logger.debug("streamed %d terms, %d digits in base %d (%s integers)",
                 bank.terms_consumed, bank.D, base, backend.BACKEND)
    return bank


def partition_bounds(N: int, partitions: int) -> List[Tuple[int, int]]:
    """
    Contiguous term ranges with roughly equal digit counts.

    Terms grow linearly in length, so the i-th cut sits near N·sqrt(i/P).
    Every range holds at least one term.
    """
    _check_terms(N)
    if partitions < 1:
        raise InvalidInputError(f"partitions must be positive, got {partitions}")
    cuts = sorted({int(round(N * math.sqrt(i / partitions))) for i in range(1, partitions)} | {N})
    ranges, prev = [], 0
    for cut in cuts:
        if cut > prev:
            ranges.append((prev + 1, cut))
            prev = cut
    return ranges


def stream_range(base: int, first: int, last: int, k_max: int, positional: bool,
                 chunk_digits: int = DEFAULT_CHUNK_DIGITS) -> CounterBank:
    """Bank over terms first..last, started from an empty carry"""
    bank = CounterBank(base, k_max, positional, first_term=first)
    _consume(bank, fib_pair(first), last, chunk_digits, set())
    return bank


def _partition_worker(args) -> CounterBank:
    return stream_range(*args)


def stream_partitioned(base: int, N: int, k_max: int, positional: bool, partitions: int,
                       chunk_digits: int = DEFAULT_CHUNK_DIGITS) -> CounterBank:
    """Run the partitions in a process pool and merge them in term order"""
    bounds = partition_bounds(N, partitions)
    jobs = [(base, first, last, k_max, positional, chunk_digits) for first, last in bounds]
    logger.info("streaming %d terms in %d partitions", N, len(jobs))
    if len(jobs) == 1:
        return _partition_worker(jobs[0])
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        banks = list(pool.map(_partition_worker, jobs))
    return merge_all(banks)
