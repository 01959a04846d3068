import pytest

from fibnormal.sequence.digits import digit_bytes
from fibnormal.sequence.fibonacci import fib_stream, initial_pair


def fib_terms(N, base):
    """Digit strings of F_1..F_N, straight from the recurrence"""
    return [digit_bytes(v, base) for v in fib_stream(initial_pair(), N)]


@pytest.fixture
def checkpoint_path(tmp_path):
    return str(tmp_path / "runs" / "state.ckpt")
