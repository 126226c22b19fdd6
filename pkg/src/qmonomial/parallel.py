"""Order-preserving worker pool shared by the testers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from .errors import ParameterError

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "MONOMIAL_THREADS"


def resolve_workers(workers: int | None = None) -> int:
    """Explicit value, else $MONOMIAL_THREADS, else 1."""
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            workers = int(raw)
        except ValueError:
            raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ParameterError(f"worker count must be >= 1, got {workers}")
    return workers


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int) -> list[R]:
    """``[fn(x) for x in items]``, possibly on a thread pool; result order is input order."""
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
