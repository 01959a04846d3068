"""
Mergeable digit and block tallies over a concatenated digit stream.

A CounterBank sees the stream as a sequence of terms (the digit strings of
consecutive Fibonacci numbers, or any other pieces). Every sliding k-block
is counted exactly once, in the chunk that holds its last digit; blocks that
start in an earlier chunk are rebuilt from the stored suffix.
"""

import copy
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from fibnormal.data.models import BlockPosition, CATEGORIES, block_label
from fibnormal.errors import CapacityError, IncompatibleBankError, InvalidInputError

logger = logging.getLogger(__name__)

MAX_K = 8
MAX_CELLS = 10 ** 8
# D above this could overflow a uint64 counter
MAX_DIGITS = 9 * 10 ** 18

LEADING, TRAILING, MIDDLE, BOUNDARY = range(4)


def check_capacity(base: int, k_max: int) -> None:
    if not 1 <= k_max <= MAX_K:
        raise InvalidInputError(f"k_max must lie in 1..{MAX_K}, got {k_max}")
    if base ** k_max > MAX_CELLS:
        raise CapacityError(f"{base}^{k_max} block counters exceed the capacity of {MAX_CELLS}")


def classify_block(p: BlockPosition, k: int) -> str:
    """
    Positional category of a k-block.

    A block whose digits come from two or more terms is a boundary block.
    Inside a term of length L >= k, offset 0 is leading, offset L - k is
    trailing unless it is also offset 0, anything else is middle.
    """
    if p.straddle or p.offset + k > p.length:
        return "boundary"
    if p.offset == 0:
        return "leading"
    if p.offset == p.length - k:
        return "trailing"
    return "middle"


def _tally(codes: np.ndarray, size: int):
    """(index, counts) such that target[index] += counts adds the histogram"""
    if size <= 1 << 16 or size <= 4 * codes.size:
        return slice(None), np.bincount(codes, minlength=size).astype(np.uint64)
    index, counts = np.unique(codes, return_counts=True)
    return index, counts.astype(np.uint64)


@dataclass
class CounterBank:
    """
    Tallies of a contiguous range of terms of the concatenation.

    blocks[k-1] has base^k counters for the sliding k-blocks; positional[k-1]
    has shape (4, base^k) indexed by CATEGORIES. prefix and suffix keep the
    first and last min(k_max - 1, D) digits so partitions can be stitched.
    """
    base: int
    k_max: int
    positional_enabled: bool = False
    D: int = 0
    terms_consumed: int = 0
    first_term: int = 1
    prefix: bytes = b""
    suffix: bytes = b""
    blocks: List[np.ndarray] = field(default_factory=list)
    positional: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        check_capacity(self.base, self.k_max)
        if not self.blocks:
            self.blocks = [np.zeros(self.base ** k, dtype=np.uint64) for k in range(1, self.k_max + 1)]
        if self.positional_enabled and not self.positional:
            self.positional = [np.zeros((4, self.base ** k), dtype=np.uint64)
                               for k in range(1, self.k_max + 1)]

    @classmethod
    def empty_like(cls, other: "CounterBank", first_term: int) -> "CounterBank":
        return cls(other.base, other.k_max, other.positional_enabled, first_term=first_term)

    @property
    def single(self) -> np.ndarray:
        return self.blocks[0]

    @property
    def carry_length(self) -> int:
        return self.k_max - 1

    @property
    def last_term(self) -> int:
        return self.first_term + self.terms_consumed - 1

    def block_total(self, k: int) -> int:
        return max(self.D - k + 1, 0)

    def copy(self) -> "CounterBank":
        return copy.deepcopy(self)

    def absorb(self, terms: Sequence[bytes]) -> None:
        """
        Count the digits of whole terms appended to the stream.

        Each element of `terms` is one term's digits as raw digit values.
        """
        if not terms:
            return
        base, carry = self.base, self.suffix
        c = len(carry)
        lengths = np.fromiter((len(t) for t in terms), dtype=np.int64, count=len(terms))
        if lengths.min() < 1:
            raise InvalidInputError("every term contributes at least one digit")
        joined = b"".join(terms)
        buf = np.frombuffer(carry + joined, dtype=np.uint8)
        starts = c + np.concatenate(([0], np.cumsum(lengths)[:-1]))
        ends = starts + lengths

        # single digits are tallied on the raw bytes; block codes need 64 bits
        codes = buf
        for k in range(1, self.k_max + 1):
            if k > 1:
                if codes.dtype != np.int64:
                    codes = codes.astype(np.int64)
                codes = codes[:-1] * base + buf[k - 1:]
            lo = max(0, c - (k - 1))
            if codes.size <= lo:
                continue
            size = base ** k
            index, counts = _tally(codes[lo:], size)
            self.blocks[k - 1][index] += counts
            if self.positional_enabled:
                self._classify(k, codes, lo, c, starts, ends, lengths, index, counts)

        self.D += len(joined)
        self.terms_consumed += len(terms)
        if self.D > MAX_DIGITS:
            raise CapacityError(f"{self.D} digits overflow the 64-bit counters")
        keep = self.carry_length
        if len(self.prefix) < keep:
            self.prefix = (self.prefix + joined)[:keep]
        self.suffix = (carry + joined)[-keep:] if keep else b""

    def _classify(self, k, codes, lo, c, starts, ends, lengths, index, counts) -> None:
        size = self.base ** k
        last_start = codes.size - 1
        table = self.positional[k - 1]

        lead = starts[lengths >= k]
        trail = (ends - k)[lengths >= k + 1]
        crossing = [np.arange(lo, min(c, last_start + 1), dtype=np.int64)]
        for r in range(1, k):
            s = ends - r
            crossing.append(s[(lengths >= r) & (s <= last_start)])
        boundary = np.concatenate(crossing)

        table[MIDDLE][index] += counts
        for row, positions in ((LEADING, lead), (TRAILING, trail), (BOUNDARY, boundary)):
            if positions.size == 0:
                continue
            sub_index, sub_counts = _tally(codes[positions], size)
            table[row][sub_index] += sub_counts
            table[MIDDLE][sub_index] -= sub_counts

    def category_counts(self, k: int, category: str) -> np.ndarray:
        if not self.positional_enabled:
            raise InvalidInputError("positional counts were not collected")
        return self.positional[k - 1][CATEGORIES.index(category)]

    def to_dict(self) -> Dict:
        """Canonical JSON form: labels in lexicographic order, zero cells omitted for k >= 2"""
        def cells(counts: np.ndarray, k: int, dense: bool) -> Dict[str, int]:
            nonzero = range(counts.size) if dense else np.flatnonzero(counts)
            return {block_label(int(i), k, self.base): int(counts[i]) for i in nonzero}

        out = {
            "base": self.base,
            "k_max": self.k_max,
            "positional": self.positional_enabled,
            "D": self.D,
            "first_term": self.first_term,
            "terms_consumed": self.terms_consumed,
            "single": cells(self.single, 1, True),
            "blocks": {str(k): cells(self.blocks[k - 1], k, k == 1) for k in range(1, self.k_max + 1)},
        }
        if self.positional_enabled:
            out["positional_counts"] = {
                str(k): {cat: cells(self.positional[k - 1][i], k, k == 1) for i, cat in enumerate(CATEGORIES)}
                for k in range(1, self.k_max + 1)
            }
        return out

    def same_counts(self, other: "CounterBank") -> bool:
        if (self.base, self.k_max, self.positional_enabled, self.D, self.terms_consumed,
                self.first_term, self.prefix, self.suffix) != (
                other.base, other.k_max, other.positional_enabled, other.D, other.terms_consumed,
                other.first_term, other.prefix, other.suffix):
            return False
        if not all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)):
            return False
        return all(np.array_equal(a, b) for a, b in zip(self.positional, other.positional))


def merge(a: CounterBank, b: CounterBank, stitch: Optional[bytes] = None) -> CounterBank:
    """
    Combine the bank of terms [i..m] with the bank of terms [m+1..N].

    b must have been computed from an empty carry (a fresh partition). The
    blocks that start in a and end in b are rebuilt from a.suffix + b.prefix;
    `stitch` may pass that concatenation explicitly. They are all boundary
    blocks. The result is bit-identical to a sequential run over [i..N].
    """
    if (a.base, a.k_max, a.positional_enabled) != (b.base, b.k_max, b.positional_enabled):
        raise IncompatibleBankError(
            f"cannot merge bank (base={a.base}, k_max={a.k_max}, positional={a.positional_enabled}) "
            f"with (base={b.base}, k_max={b.k_max}, positional={b.positional_enabled})")
    if b.terms_consumed == 0:
        return a.copy()
    if a.terms_consumed == 0:
        return b.copy()
    if b.first_term != a.first_term + a.terms_consumed:
        raise IncompatibleBankError(
            f"partitions are not contiguous: first bank ends at term {a.last_term}, "
            f"second starts at term {b.first_term}")

    out = a.copy()
    for k in range(1, out.k_max + 1):
        out.blocks[k - 1] += b.blocks[k - 1]
        if out.positional_enabled:
            out.positional[k - 1] += b.positional[k - 1]

    joint = stitch if stitch is not None else a.suffix + b.prefix
    cut = len(a.suffix)
    digits = np.frombuffer(joint, dtype=np.uint8).astype(np.int64)
    for k in range(2, out.k_max + 1):
        first = max(0, cut - (k - 1))
        last = min(cut - 1, len(joint) - k)
        if last < first:
            continue
        windows = np.zeros(last - first + 1, dtype=np.int64)
        for j in range(k):
            windows = windows * out.base + digits[first + j:last + j + 1]
        index, counts = _tally(windows, out.base ** k)
        out.blocks[k - 1][index] += counts
        if out.positional_enabled:
            out.positional[k - 1][BOUNDARY][index] += counts

    keep = out.carry_length
    out.prefix = (a.prefix + b.prefix)[:keep] if len(a.prefix) < keep else a.prefix
    out.suffix = (a.suffix + b.suffix)[-keep:] if keep else b""
    out.D = a.D + b.D
    out.terms_consumed = a.terms_consumed + b.terms_consumed
    logger.debug("merged terms %d..%d with %d..%d", a.first_term, a.last_term, b.first_term, b.last_term)
    return out


def merge_all(banks: Sequence[CounterBank]) -> CounterBank:
    """Left fold of merge over contiguous partitions"""
    if not banks:
        raise InvalidInputError("merge_all needs at least one bank")
    result = banks[0]
    for bank in banks[1:]:
        result = merge(result, bank)
    return result
