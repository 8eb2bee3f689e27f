import logging
import multiprocessing as mp
from multiprocessing.pool import Pool
from typing import Any, Callable, Optional, Sequence, TypeVar

from src.application.interfaces.i_block_executor import IBlockExecutor
from src.domain.exceptions.domain_exceptions import ArgumentRangeError

logger = logging.getLogger(__name__)

T = TypeVar("T")
Item = TypeVar("Item")

# Task shared with forked workers; set before the pool starts.
_TASK: Optional[Callable[[Any], Any]] = None


def _init_worker(task: Callable[[Any], Any]) -> None:
    global _TASK
    _TASK = task


def _run_item(item: Any) -> Any:
    assert _TASK is not None, "worker started without a task"
    return _TASK(item)


class SerialBlockExecutor(IBlockExecutor):
    """Runs every block in the calling process."""

    @property
    def workers(self) -> int:
        return 1

    def map_ordered(self, fn: Callable[[Item], T], items: Sequence[Item]) -> list[T]:
        return [fn(item) for item in items]


class ProcessPoolBlockExecutor(IBlockExecutor):
    """Spreads work items over a process pool and returns results in item order.

    The task (a kernel holding the prime table) reaches workers once: through
    fork inheritance where available, otherwise through the pool initializer.
    A pool stays up for as long as the same task object keeps arriving and
    is replaced when a different one does. ``close`` shuts it down.
    """

    def __init__(self, workers: int):
        if workers < 1:
            raise ArgumentRangeError(f"workers must be at least 1, got {workers}")
        self._workers = workers
        try:
            self._ctx = mp.get_context("fork")
        except ValueError:
            self._ctx = mp.get_context()
        self._pool: Optional[Pool] = None
        self._pool_task: Optional[Callable[[Any], Any]] = None
        self.pools_started = 0

    @property
    def workers(self) -> int:
        return self._workers

    @property
    def is_open(self) -> bool:
        return self._pool is not None

    def _chunksize(self, n_tasks: int) -> int:
        return max(1, n_tasks // (self._workers * 4))

    def _start_pool(self, fn: Callable[[Any], Any]) -> Pool:
        global _TASK
        if self._ctx.get_start_method() == "fork":
            _TASK = fn
            try:
                pool = self._ctx.Pool(processes=self._workers)
            finally:
                _TASK = None
        else:
            pool = self._ctx.Pool(processes=self._workers, initializer=_init_worker, initargs=(fn,))
        self.pools_started += 1
        logger.debug("Started pool %d with %d workers", self.pools_started, self._workers)
        return pool

    def _pool_for(self, fn: Callable[[Any], Any]) -> Pool:
        if self._pool is None or self._pool_task is not fn:
            self.close()
            self._pool = self._start_pool(fn)
            self._pool_task = fn
        return self._pool

    def map_ordered(self, fn: Callable[[Item], T], items: Sequence[Item]) -> list[T]:
        if len(items) <= 1:
            return [fn(item) for item in items]
        chunksize = self._chunksize(len(items))
        logger.debug(
            "Dispatching %d items to %d workers (chunksize=%d)",
            len(items), self._workers, chunksize,
        )
        pool = self._pool_for(fn)
        return pool.map(_run_item, items, chunksize=chunksize)

    def close(self) -> None:
        if self._pool is None:
            return
        self._pool.close()
        self._pool.join()
        self._pool = None
        self._pool_task = None

    def __enter__(self) -> "ProcessPoolBlockExecutor":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()


def create_block_executor(workers: int) -> IBlockExecutor:
    """Serial executor for one worker, a process pool otherwise."""
    if workers < 1:
        raise ArgumentRangeError(f"workers must be at least 1, got {workers}")
    if workers == 1:
        return SerialBlockExecutor()
    return ProcessPoolBlockExecutor(workers)
