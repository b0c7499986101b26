"""Thread-pool helpers honoring the SHAPEFILTER_THREADS cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_ENV_VAR = "SHAPEFILTER_THREADS"


def thread_limit() -> int:
    """Worker cap from the environment; defaults to the CPU count."""
    raw = os.environ.get(_ENV_VAR, "")
    try:
        value = int(raw)
    except ValueError:
        value = os.cpu_count() or 1
    return max(value, 1)


def map_ordered(fn, items):
    """Map ``fn`` over ``items``, preserving order.

    Runs on a thread pool when the cap allows and the batch is big enough
    to amortize the pool; results are assembled in input order either way,
    so output is deterministic.
    """
    items = list(items)
    workers = min(thread_limit(), len(items)) if items else 1
    if workers <= 1 or len(items) < 4:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
