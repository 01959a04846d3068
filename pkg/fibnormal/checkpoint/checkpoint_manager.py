"""
Checkpoint files for resumable streaming runs.

Layout (all integers little-endian):

    magic        8 bytes  b"FIBCKPT\\0"
    header       u16 version, u16 base, u8 k_max, u8 positional,
                 u64 next term n, u64 terms_consumed, u64 D, u64 first_term
    pair         (F_n, F_{n+1}) as u32 length + magnitude bytes each
    carry        u32 length + digit bytes, then prefix and suffix the same way
    counters     for k = 1..k_max: base^k u64 block counters, followed by
                 4 * base^k u64 positional counters when positional is set
    checksum     sha256 of everything above
"""

import hashlib
import logging
import os
import struct
import tempfile
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from fibnormal.data.models import FibCursor, FibPair
from fibnormal.engine.counters import CounterBank
from fibnormal.errors import CheckpointIntegrityError, CheckpointVersionError, InvalidInputError
from fibnormal.sequence import backend

logger = logging.getLogger(__name__)

MAGIC = b"FIBCKPT\0"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<HHBBQQQQ")
_LENGTH = struct.Struct("<I")
_DIGEST_SIZE = hashlib.sha256().digest_size
_COUNTER = np.dtype("<u8")


@dataclass
class CheckpointPolicy:
    """Where and how often a streaming run saves its state"""
    path: str
    every_terms: int = 0
    resume: bool = False

    def due(self, terms_done: int) -> bool:
        return self.every_terms > 0 and terms_done % self.every_terms == 0

    def exists(self) -> bool:
        return os.path.exists(self.path)


def _magnitude(v) -> bytes:
    v = int(v)
    return v.to_bytes((v.bit_length() + 7) // 8, "little")


def _encode(cursor: FibCursor, bank: CounterBank) -> bytes:
    parts = [
        MAGIC,
        _HEADER.pack(FORMAT_VERSION, bank.base, bank.k_max, int(bank.positional_enabled),
                     cursor.n, bank.terms_consumed, bank.D, bank.first_term),
    ]
    for chunk in (_magnitude(cursor.pair.f_n), _magnitude(cursor.pair.f_n1),
                  cursor.suffix_carry, bank.prefix, bank.suffix):
        parts.append(_LENGTH.pack(len(chunk)))
        parts.append(chunk)
    for k in range(1, bank.k_max + 1):
        parts.append(bank.blocks[k - 1].astype(_COUNTER, copy=False).tobytes())
        if bank.positional_enabled:
            parts.append(bank.positional[k - 1].astype(_COUNTER, copy=False).tobytes())
    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


class _Reader:
    """Sequential reader that reports where a short file ran out"""

    def __init__(self, data: bytes, path: str):
        self.data = data
        self.path = path
        self.offset = 0

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise CheckpointIntegrityError(
                f"checkpoint {self.path} is truncated: needed {size} bytes, "
                f"{len(self.data) - self.offset} left", offset=self.offset)
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def unpack(self, fmt: struct.Struct):
        return fmt.unpack(self.take(fmt.size))

    def sized(self) -> bytes:
        (size,) = self.unpack(_LENGTH)
        return self.take(size)

    def counters(self, shape) -> np.ndarray:
        count = int(np.prod(shape))
        raw = self.take(count * _COUNTER.itemsize)
        return np.frombuffer(raw, dtype=_COUNTER).astype(np.uint64).reshape(shape)


def _decode(data: bytes, path: str) -> Tuple[FibCursor, CounterBank]:
    reader = _Reader(data, path)
    if reader.take(len(MAGIC)) != MAGIC:
        raise CheckpointIntegrityError(f"{path} is not a fibnormal checkpoint", offset=0)
    version, base, k_max, positional, n, terms, D, first_term = reader.unpack(_HEADER)
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(
            f"checkpoint {path} has format version {version}, expected {FORMAT_VERSION}")

    f_n = int.from_bytes(reader.sized(), "little")
    f_n1 = int.from_bytes(reader.sized(), "little")
    carry, prefix, suffix = reader.sized(), reader.sized(), reader.sized()
    blocks, table = [], []
    for k in range(1, k_max + 1):
        blocks.append(reader.counters((base ** k,)))
        if positional:
            table.append(reader.counters((4, base ** k)))

    body_end = reader.offset
    digest = reader.take(_DIGEST_SIZE)
    if hashlib.sha256(data[:body_end]).digest() != digest:
        raise CheckpointIntegrityError(f"checkpoint {path} fails its checksum", offset=body_end)
    if reader.offset != len(data):
        raise CheckpointIntegrityError(
            f"checkpoint {path} has {len(data) - reader.offset} trailing bytes", offset=reader.offset)

    bank = CounterBank(base, k_max, bool(positional), D=D, terms_consumed=terms,
                       first_term=first_term, prefix=prefix, suffix=suffix,
                       blocks=blocks, positional=table)
    pair = FibPair(n, backend.MPZ(f_n), backend.MPZ(f_n1))
    cursor = FibCursor(base=base, n=n, pair=pair, pos_in_term=0, suffix_carry=carry)
    return cursor, bank


def checkpoint_save(cursor: FibCursor, bank: CounterBank, path: str) -> None:
    """
    Atomically write the state of a run stopped at a term boundary

    Args:
        cursor: Position of the next term to emit
        bank: Counts of every term before it
        path: Destination file; replaced only once the new file is complete
    """
    if cursor.pos_in_term != 0:
        raise InvalidInputError("checkpoints are only taken at term boundaries")
    if cursor.base != bank.base or cursor.n != bank.first_term + bank.terms_consumed:
        raise InvalidInputError(
            f"cursor at term {cursor.n} (base {cursor.base}) does not follow a bank ending at "
            f"term {bank.last_term} (base {bank.base})")
    if cursor.suffix_carry != bank.suffix:
        raise InvalidInputError("cursor carry differs from the bank suffix")

    data = _encode(cursor, bank)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".fibckpt-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.info("checkpoint saved at term %d (%d digits, %d bytes) to %s",
                cursor.n - 1, bank.D, len(data), path)


def checkpoint_load(path: str) -> Tuple[FibCursor, CounterBank]:
    """
    Read and verify a checkpoint

    Returns:
        The cursor of the next term and the bank of everything before it
    """
    with open(path, "rb") as f:
        data = f.read()
    cursor, bank = _decode(data, path)
    logger.info("checkpoint %s resumes at term %d", path, cursor.n)
    return cursor, bank


def load_compatible(policy: CheckpointPolicy, base: int, k_max: int,
                    positional: bool) -> Optional[Tuple[FibCursor, CounterBank]]:
    """State to resume from, or None when there is nothing to resume"""
    if not policy.resume or not policy.exists():
        return None
    cursor, bank = checkpoint_load(policy.path)
    if (bank.base, bank.k_max, bank.positional_enabled) != (base, k_max, positional):
        raise InvalidInputError(
            f"checkpoint {policy.path} was taken with base={bank.base}, k_max={bank.k_max}, "
            f"positional={bank.positional_enabled}; this run asks for base={base}, "
            f"k_max={k_max}, positional={positional}")
    return cursor, bank
