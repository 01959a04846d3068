"""
fibnormal: digit statistics of the concatenated Fibonacci constant

Streams 0.F_1F_2F_3... in any base from 2 to 256, counts digits and sliding
k-blocks (including those that straddle two terms), and reports uniformity
tests, per-term normality censuses, structural baselines and the
number-theoretic side questions around the sequence.
"""

__version__ = "0.1.0"

from fibnormal.core.lab import FibNormalLab
from fibnormal.engine.counters import CounterBank
from fibnormal.engine.stream import stream_analyze
