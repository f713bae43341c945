"""Small runtime helpers shared across modules."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "COARSELAB_THREADS"


def thread_cap() -> int:
    """Worker-thread cap from the COARSELAB_THREADS environment variable.

    Unset or empty means 1 (fully serial, the deterministic default).  The
    value must parse as a positive integer.
    """
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def thread_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map fn over items, in order, using at most thread_cap() workers.

    Results are returned in input order regardless of completion order, so
    output is identical to the serial map.
    """
    workers = min(thread_cap(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
