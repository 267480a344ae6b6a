"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Map fn over items, optionally on a thread pool.

    Results come back in input order regardless of scheduling, so callers
    stay deterministic for any thread count.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def round_half_even(x: float) -> int:
    """Nearest integer with ties to even, as a Python int."""
    rounded = round(x)  # Python's round implements ties-to-even on floats
    return int(rounded)
