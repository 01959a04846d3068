"""
Radix conversion between big integers and digit strings.

Conversions are subquadratic in the digit count: gmpy2 delegates to GMP,
and the pure-Python fallback splits at balanced powers of the base the way
CPython's _pylong does for decimal strings.
"""

import math
from functools import lru_cache

import numpy as np

from fibnormal.data.models import DigitString
from fibnormal.errors import InvalidInputError
from fibnormal.sequence import backend

MAX_BASE = 256

# Leaves of the divide-and-conquer recursion; str() stays far below
# CPython's int_max_str_digits limit at this size
DIGLIM = 1000

_LOWER = b"0123456789abcdefghijklmnopqrstuvwxyz"
_MIXED = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
_DECODE_LOWER = bytes.maketrans(_LOWER, bytes(range(len(_LOWER))))
_DECODE_MIXED = bytes.maketrans(_MIXED, bytes(range(len(_MIXED))))
_ENCODE_LOWER = bytes.maketrans(bytes(range(len(_LOWER))), _LOWER)


def check_base(base: int) -> None:
    if not isinstance(base, int) or base < 2:
        raise InvalidInputError(f"invalid base {base}: must be an integer >= 2")
    if base > MAX_BASE:
        raise InvalidInputError(f"invalid base {base}: at most {MAX_BASE} is supported")


@lru_cache(maxsize=256)
def _power(base: int, w: int) -> int:
    return base ** w


def _is_power_of_two(base: int) -> bool:
    return base & (base - 1) == 0


def _decimal_string(n: int) -> str:
    """Asymptotically fast conversion of an int to a decimal string"""
    w = int(n.bit_length() * math.log10(2)) + 1

    def inner(n, w):
        if w <= DIGLIM:
            return str(n)
        w2 = w >> 1
        hi, lo = divmod(n, _power(10, w2))
        return inner(hi, w - w2) + inner(lo, w2).zfill(w2)

    s = inner(n, w)
    if len(s) > 1 and s[0] == "0":
        s = s.lstrip("0") or "0"
    return s


def _power_of_two_digits(n: int, base: int) -> bytes:
    """Linear-time regrouping of the binary expansion into base-2^j digits"""
    j = base.bit_length() - 1
    if n == 0:
        return b"\x00"
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
    pad = (-bits.size) % j
    if pad:
        bits = np.concatenate((np.zeros(pad, dtype=np.uint8), bits))
    weights = (1 << np.arange(j - 1, -1, -1)).astype(np.uint16)
    digits = (bits.reshape(-1, j).astype(np.uint16) @ weights).astype(np.uint8)
    first = int(np.argmax(digits != 0))
    return digits[first:].tobytes()


def _generic_digits(n: int, base: int) -> bytes:
    """Divide-and-conquer conversion for bases without a faster route"""
    w = int(n.bit_length() / math.log2(base)) + 1
    leaf = max(1, int(DIGLIM / math.log10(base)))

    def inner(n, w, out):
        if w <= leaf:
            chunk = bytearray(w)
            for i in range(w - 1, -1, -1):
                n, chunk[i] = divmod(n, base)
            out += chunk
            return
        w2 = w >> 1
        hi, lo = divmod(n, _power(base, w2))
        inner(hi, w - w2, out)
        inner(lo, w2, out)

    out = bytearray()
    inner(n, w, out)
    first = next((i for i, d in enumerate(out) if d), len(out) - 1)
    return bytes(out[first:])


def digit_bytes(v, base: int) -> bytes:
    """
    Digits of v in the given base as raw digit values, most significant first.

    This is the hot path of the streaming engine; digit_string wraps it.
    """
    check_base(base)
    if v < 0:
        raise InvalidInputError("digit strings are defined for non-negative integers only")
    if backend.gmpy is not None and base <= backend.GMPY_MAX_BASE:
        text = backend.MPZ(v).digits(base).encode("ascii")
        return text.translate(_DECODE_LOWER if base <= 36 else _DECODE_MIXED)
    v = int(v)
    if base == 10:
        return _decimal_string(v).encode("ascii").translate(_DECODE_LOWER)
    if _is_power_of_two(base):
        return _power_of_two_digits(v, base)
    return _generic_digits(v, base)


def digit_string(v, base: int) -> DigitString:
    """Most-significant-first digit string of v in the given base"""
    return DigitString(base, digit_bytes(v, base))


def from_digits(ds: DigitString) -> int:
    """Inverse of digit_string"""
    base = ds.base
    digits = ds.digits

    def inner(lo, hi):
        w = hi - lo
        if w <= DIGLIM:
            if base <= 36:
                return int(digits[lo:hi].translate(_ENCODE_LOWER), base)
            value = 0
            for d in digits[lo:hi]:
                value = value * base + d
            return value
        mid = lo + (w >> 1)
        return inner(lo, mid) * _power(base, hi - mid) + inner(mid, hi)

    return inner(0, len(digits))
