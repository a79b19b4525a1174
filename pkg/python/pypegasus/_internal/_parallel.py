"""Ordered parallel map.

Results always come back in input order, so reductions done by the caller are
the same for any worker count. Each call runs in a copy of the submitting
thread's context, so the run id reaches log lines written by workers.
"""

from __future__ import annotations

import contextvars
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from pypegasus.config import get_default_workers

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """Apply ``fn`` to every item, possibly on threads, keeping input order.

    Args:
        fn: Pure function.
        items: Inputs.
        workers: Thread count. None uses ``get_default_workers()``.

    Returns:
        ``[fn(x) for x in items]``.
    """
    items = list(items)
    n = workers if workers is not None else get_default_workers()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(contextvars.copy_context().run, fn, x) for x in items]
        return [f.result() for f in futures]
