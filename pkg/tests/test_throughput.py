import os
import time

import pytest

from fibnormal.engine.stream import stream_analyze
from fibnormal.sequence.fibonacci import total_digits
from fibnormal.utils.progress import format_rate

FLOOR_DIGITS_PER_SECOND = 50e6
FLOOR_SECONDS = 30.0

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(not os.environ.get("FIBNORMAL_BENCHMARK"),
                       reason="set FIBNORMAL_BENCHMARK=1 to measure throughput on this machine"),
]


def test_single_partition_throughput(record_property):
    N = 100000
    started = time.perf_counter()
    bank = stream_analyze(10, N, k_max=1)
    elapsed = time.perf_counter() - started
    rate = bank.D / elapsed
    record_property("digits_per_second", rate)
    print(f"\n{bank.D:,} digits in {elapsed:.1f}s, {format_rate(rate)}")
    assert bank.D == total_digits(N, 10)
    assert rate >= FLOOR_DIGITS_PER_SECOND
    assert elapsed <= FLOOR_SECONDS
