"""
Chunked work runner.

Runs a picklable function over a list of tasks, on a process pool when
more than one job is requested and inline otherwise. Results always come
back in task order so downstream output is deterministic.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from whitehead.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class ChunkProcessor:
    """Maps work over chunks with an optional process pool."""

    def __init__(self, jobs: Optional[int] = None):
        self.jobs = max(1, jobs if jobs is not None else settings.jobs)

    def map(self, fn: Callable[[T], R], tasks: Sequence[T]) -> List[R]:
        """
        Apply fn to every task.

        Args:
            fn: Module-level function (must pickle for the pool)
            tasks: Work items

        Returns:
            Results in task order
        """
        if self.jobs == 1 or len(tasks) < 2:
            return [fn(task) for task in tasks]

        workers = min(self.jobs, len(tasks))
        logger.debug("Dispatching %d chunks to %d workers", len(tasks), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks))

    @staticmethod
    def chunk(items: Sequence[T], parts: int) -> List[List[T]]:
        """Split items into at most `parts` contiguous chunks of near-equal size."""
        if not items:
            return []
        parts = max(1, min(parts, len(items)))
        size, extra = divmod(len(items), parts)
        chunks, start = [], 0
        for index in range(parts):
            stop = start + size + (1 if index < extra else 0)
            chunks.append(list(items[start:stop]))
            start = stop
        return chunks
