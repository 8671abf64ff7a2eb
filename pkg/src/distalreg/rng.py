"""Seeded randomness with per-task derived streams.

Every random choice in the library comes from ``derive_rng(seed, *keys)``,
where the keys name the task (module, round, part index, ...).  Streams
depend only on the seed and the keys, so the order in which tasks run,
or the number of worker threads, never changes results.
"""
from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor

MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *keys) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed) & MASK64).encode())
    for k in keys:
        h.update(b"\x1f")
        h.update(repr(k).encode())
    return int.from_bytes(h.digest(), "little")


def derive_rng(seed: int, *keys) -> random.Random:
    return random.Random(derive_seed(seed, *keys))


_THREADS = 1


def set_threads(n: int) -> None:
    """Worker count for ``parallel_map``; results never depend on it."""
    global _THREADS
    _THREADS = max(1, int(n))


def parallel_map(fn, items, threads: int | None = None) -> list:
    """Ordered map, optionally on a thread pool."""
    items = list(items)
    n = _THREADS if threads is None else max(1, int(threads))
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
