"""
Streaming digit and block counting for the Fibonacci concatenation
"""

from fibnormal.engine.counters import CounterBank, classify_block, merge, merge_all, MAX_K, MAX_CELLS
from fibnormal.engine.stream import (
    stream_analyze,
    stream_partitioned,
    stream_range,
    partition_bounds,
    DEFAULT_CHUNK_DIGITS,
)

__all__ = [
    "CounterBank", "classify_block", "merge", "merge_all", "MAX_K", "MAX_CELLS",
    "stream_analyze", "stream_partitioned", "stream_range", "partition_bounds",
    "DEFAULT_CHUNK_DIGITS",
]
