"""Segmented Moebius sieve and streaming Mertens sums.

Blocks are independent once the base prime list exists, so they can be
sieved from a thread pool; every reduction here walks blocks in ascending
order regardless of how many workers produced them.
"""
from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator, Sequence, TypeVar

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError

__all__ = [
    "DEFAULT_CAPACITY",
    "DEFAULT_BLOCK_SIZE",
    "MoebiusBlock",
    "MertensCheckpoint",
    "sieve_block",
    "mu",
    "mertens",
    "mertens_checkpoints",
    "block_ranges",
    "map_blocks",
    "default_workers",
    "write_block_cache",
    "read_block_cache",
]

DEFAULT_CAPACITY = 2_000_000_000
DEFAULT_BLOCK_SIZE = 1 << 20

_CACHE_HEADER = struct.Struct("<QQ")

T = TypeVar("T")


@dataclass(frozen=True)
class MoebiusBlock:
    """mu(n) for start <= n < start + len(values), stored as int8."""

    start: int
    values: np.ndarray

    def __post_init__(self):
        if self.start < 1:
            raise DomainError(f"block start must be >= 1, got {self.start}")
        if len(self.values) == 0:
            raise DomainError("block length must be positive")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def stop(self) -> int:
        return self.start + len(self.values)

    def __getitem__(self, n: int) -> int:
        if not self.start <= n < self.stop:
            raise IndexError(f"{n} outside block [{self.start}, {self.stop})")
        return int(self.values[n - self.start])


@dataclass(frozen=True)
class MertensCheckpoint:
    n: int
    value: int

    def __post_init__(self):
        if abs(self.value) > self.n:
            raise DomainError(f"|M({self.n})| = {abs(self.value)} exceeds {self.n}")


def default_workers() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


@lru_cache(maxsize=4)
def _primes_for_capacity(capacity: int) -> np.ndarray:
    primes = _kernels.base_primes(math.isqrt(capacity) + 1)
    primes.setflags(write=False)
    return primes


def _check_range(start: int, length: int, capacity: int) -> None:
    if start < 1:
        raise DomainError(f"start must be >= 1, got {start}")
    if length < 1:
        raise DomainError(f"length must be >= 1, got {length}")
    if start + length - 1 > capacity:
        raise CapacityError(
            f"range [{start}, {start + length}) exceeds sieve capacity {capacity}"
        )


def sieve_block(start: int, length: int, capacity: int = DEFAULT_CAPACITY) -> MoebiusBlock:
    """Exact mu(n) on [start, start+length) by segmented sieving.

    Each prime p <= sqrt(start+length) flips the sign of its multiples and
    zeroes multiples of p^2; a leftover cofactor > 1 is one more prime.
    """
    start, length = int(start), int(length)
    _check_range(start, length, capacity)
    values = _kernels.sieve_mu(start, length, _primes_for_capacity(capacity))
    return MoebiusBlock(start, values)


def mu(n: int, capacity: int = DEFAULT_CAPACITY) -> int:
    """Single Moebius value (sieves a length-1 block)."""
    return sieve_block(n, 1, capacity)[n]


def block_ranges(start: int, stop: int, block_size: int = DEFAULT_BLOCK_SIZE) -> list[tuple[int, int]]:
    """(start, length) pairs covering [start, stop] inclusive, in order."""
    if block_size < 1:
        raise DomainError("block_size must be positive")
    out = []
    a = start
    while a <= stop:
        length = min(block_size, stop - a + 1)
        out.append((a, length))
        a += length
    return out


def map_blocks(
    func: Callable[[MoebiusBlock], T],
    stop: int,
    *,
    start: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
    workers: int | None = None,
    capacity: int = DEFAULT_CAPACITY,
) -> list[T]:
    """Apply ``func`` to every sieved block covering [start, stop].

    Results come back in ascending block order whatever ``workers`` is.
    ``func`` should release the GIL (numba ``nogil``) to benefit from threads.
    """
    _check_range(start, stop - start + 1, capacity)
    ranges = block_ranges(start, stop, block_size)
    primes = _primes_for_capacity(capacity)

    def job(r):
        a, length = r
        return func(MoebiusBlock(a, _kernels.sieve_mu(a, length, primes)))

    workers = workers or default_workers()
    if workers == 1 or len(ranges) == 1:
        return [job(r) for r in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, ranges))


def iter_blocks(stop: int, *, start: int = 1, block_size: int = DEFAULT_BLOCK_SIZE,
                capacity: int = DEFAULT_CAPACITY) -> Iterator[MoebiusBlock]:
    for a, length in block_ranges(start, stop, block_size):
        yield sieve_block(a, length, capacity)


def mertens_checkpoints(ns: Sequence[int], *, block_size: int = DEFAULT_BLOCK_SIZE,
                        workers: int | None = None,
                        capacity: int = DEFAULT_CAPACITY) -> list[MertensCheckpoint]:
    """M(n) for every n in ``ns`` from one streamed pass up to max(ns)."""
    ns = sorted({int(n) for n in ns})
    if not ns:
        return []
    if ns[0] < 1:
        raise DomainError("Mertens checkpoints need n >= 1")
    top = ns[-1]
    edges = np.asarray(ns, dtype=np.int64)

    def reduce_block(block: MoebiusBlock):
        # block total plus partial sums at any checkpoint inside the block
        cs = np.cumsum(block.values, dtype=np.int64)
        inside = edges[(edges >= block.start) & (edges < block.stop)]
        return int(cs[-1]), [(int(n), int(cs[n - block.start])) for n in inside]

    parts = map_blocks(reduce_block, top, block_size=block_size, workers=workers, capacity=capacity)
    out = []
    running = 0
    for total, marks in parts:
        for n, partial in marks:
            out.append(MertensCheckpoint(n, running + partial))
        running += total
    return out


def mertens(n: int, *, block_size: int = DEFAULT_BLOCK_SIZE, workers: int | None = None,
            capacity: int = DEFAULT_CAPACITY) -> MertensCheckpoint:
    """Exact M(n) = sum_{k<=n} mu(k) by streaming sieved blocks."""
    n = int(n)
    if n < 1:
        raise DomainError(f"mertens needs n >= 1, got {n}")
    parts = map_blocks(lambda b: int(_kernels.block_sum_int(b.values)), n,
                       block_size=block_size, workers=workers, capacity=capacity)
    return MertensCheckpoint(n, sum(parts))


def write_block_cache(path: str | os.PathLike, block: MoebiusBlock) -> None:
    """Binary cache: little-endian u64 start, u64 len, then len signed bytes."""
    with open(path, "wb") as fh:
        fh.write(_CACHE_HEADER.pack(block.start, len(block)))
        fh.write(np.ascontiguousarray(block.values, dtype=np.int8).tobytes())


def read_block_cache(path: str | os.PathLike) -> MoebiusBlock:
    data = Path(path).read_bytes()
    if len(data) < _CACHE_HEADER.size:
        raise DomainError(f"{path}: truncated block cache header")
    start, length = _CACHE_HEADER.unpack_from(data)
    body = data[_CACHE_HEADER.size:]
    if len(body) != length:
        raise DomainError(f"{path}: header says {length} entries, found {len(body)}")
    values = np.frombuffer(body, dtype=np.int8).copy()
    if values.size and (values.min() < -1 or values.max() > 1):
        raise DomainError(f"{path}: entries outside {{-1, 0, 1}}")
    return MoebiusBlock(int(start), values)
