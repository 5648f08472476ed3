"""Process pool helpers sharing one read-only FactorTable across workers."""

from __future__ import annotations

import logging
import multiprocessing
from typing import Any, Callable, Iterable, List, Optional, TypeVar

from orbitk.core.models import FactorTable

logger = logging.getLogger(__name__)

T = TypeVar("T")

_worker_table: Optional[FactorTable] = None


def _init_worker(table: FactorTable) -> None:
    global _worker_table
    _worker_table = table


def worker_table() -> FactorTable:
    if _worker_table is None:
        raise RuntimeError("worker table requested outside a pool initialized by map_with_table")
    return _worker_table


def _call(payload: tuple) -> Any:
    func, item, kwargs = payload
    return func(item, worker_table(), **kwargs)


def map_with_table(
    func: Callable[..., T],
    items: Iterable[Any],
    table: FactorTable,
    threads: int = 1,
    **kwargs: Any,
) -> List[T]:
    """Apply ``func(item, table, **kwargs)`` to every item, preserving input order.

    ``func`` must be a module-level function so it can be sent to workers.
    With ``threads == 1`` everything runs in the calling process.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item, table, **kwargs) for item in items]
    workers = min(threads, len(items))
    logger.debug("dispatching %d items to %d workers", len(items), workers)
    with multiprocessing.Pool(processes=workers, initializer=_init_worker, initargs=(table,)) as pool:
        return pool.map(_call, [(func, item, kwargs) for item in items], chunksize=1)
