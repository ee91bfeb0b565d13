"""Deterministic worker-pool helpers.

The CYCLESTAT_THREADS environment variable caps the number of worker
threads. Work is always partitioned into fixed-size chunks that do not
depend on the worker count, and results are reassembled by chunk index,
so outputs are bit-identical for any thread setting.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

_ENV_VAR = "CYCLESTAT_THREADS"
_DEFAULT_CAP = 4


def thread_count() -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is not None:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return max(1, min(_DEFAULT_CAP, os.cpu_count() or 1))


def chunk_ranges(n_items: int, chunk_size: int) -> list[tuple[int, int]]:
    """Fixed partition of range(n_items) into [start, stop) chunks."""
    if n_items <= 0:
        return []
    return [(i, min(i + chunk_size, n_items)) for i in range(0, n_items, chunk_size)]


def run_chunked(fn: Callable, chunks: Sequence) -> list:
    """Apply ``fn`` to every chunk, possibly on worker threads.

    Results come back in chunk order regardless of scheduling.
    """
    workers = min(thread_count(), len(chunks)) if chunks else 0
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
