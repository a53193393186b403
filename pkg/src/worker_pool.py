"""
Worker pool for batch jobs.

Table cells, wereset resolutions, move-test seeds and enumeration
branches are independent; this module fans them out over a
ThreadPoolExecutor and hands results back in submission order so output
stays deterministic.

The jobs are pure Python and hold the GIL, so extra workers overlap them
but do not make them faster. What the pool guarantees for any worker
count is the result order, and with it identical output.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class BatchWorkerPool:
    """
    Runs a function over a batch of independent items.

    With one worker the items are processed inline, which keeps tracebacks
    and logging simple for the default configuration.
    """

    def __init__(self, num_workers: int = 1, name: str = "BatchWorker"):
        """
        Initialize the pool.

        Args:
            num_workers: Number of worker threads; values below 1 mean 1
            name: Thread name prefix and logger name
        """
        self.num_workers = max(1, int(num_workers))
        self.name = name
        self.executor: Optional[ThreadPoolExecutor] = None
        self.logger = logging.getLogger(f"{name}Pool")

    def start(self) -> None:
        """Start the worker threads."""
        if self.num_workers > 1 and self.executor is None:
            self.logger.debug(f"Starting {self.num_workers} workers")
            self.executor = ThreadPoolExecutor(
                max_workers=self.num_workers, thread_name_prefix=self.name
            )

    def stop(self) -> None:
        """Stop the worker threads, waiting for running items."""
        if self.executor:
            self.executor.shutdown(wait=True)
            self.executor = None
            self.logger.debug("Workers stopped")

    def __enter__(self) -> "BatchWorkerPool":
        self.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()

    def map(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """
        Apply func to every item and return the results in item order.

        The first exception raised by any item propagates to the caller.
        """
        batch = list(items)
        self.logger.info(f"Processing {len(batch)} items with {self.num_workers} workers")
        if self.executor is None:
            return [func(item) for item in batch]
        futures = [self.executor.submit(func, item) for item in batch]
        return [future.result() for future in futures]


def run_batch(
    func: Callable[[T], R], items: Iterable[T], jobs: int = 1, name: str = "BatchWorker"
) -> List[R]:
    """One-shot helper: map func over items with a temporary pool."""
    with BatchWorkerPool(num_workers=jobs, name=name) as pool:
        return pool.map(func, items)
