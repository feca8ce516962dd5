"""Frame worker pool: an asyncio front over a process executor.

Tasks are independent batches; results come back in task order so the
callers' reductions do not depend on scheduling.
"""

import asyncio
import logging
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from functools import partial
from typing import Any, Callable, Optional, Sequence

from config import SETTINGS

logger = logging.getLogger(__name__)

HEARTBEAT_SECONDS = 30.0


class FramePool:
    """Runs ``fn(*task)`` for each task; workers=1 stays in-process."""

    def __init__(
        self,
        workers: int = SETTINGS.simulation.workers,
        heartbeat: float = HEARTBEAT_SECONDS,
        executor: Optional[Executor] = None,
    ):
        self.workers = max(1, int(workers))
        self.heartbeat = heartbeat
        self._executor = executor
        self._owns_executor = executor is None
        self.completed = 0

    @property
    def window(self) -> int:
        """Batches to submit at once."""
        return self.workers

    def _get_executor(self) -> Executor:
        if self._executor is None:
            self._executor = ProcessPoolExecutor(max_workers=self.workers)
        return self._executor

    async def _heartbeat(self, total: int, started: float) -> None:
        while True:
            await asyncio.sleep(self.heartbeat)
            logger.info(
                "Worker heartbeat: %d/%d batches done after %.0f s",
                self.completed, total, time.perf_counter() - started,
            )

    async def map(self, fn: Callable[..., Any], tasks: Sequence[tuple]) -> list[Any]:
        started = time.perf_counter()
        if self.workers == 1 and self._executor is None:
            results = []
            for task in tasks:
                results.append(fn(*task))
                self.completed += 1
            return results

        loop = asyncio.get_running_loop()
        executor = self._get_executor()
        beat = asyncio.create_task(self._heartbeat(len(tasks), started))

        async def run(task: tuple) -> Any:
            try:
                result = await loop.run_in_executor(executor, partial(fn, *task))
            except Exception as e:
                logger.error("Worker error: %s", str(e))
                raise
            self.completed += 1
            return result

        try:
            return list(await asyncio.gather(*(run(task) for task in tasks)))
        finally:
            beat.cancel()

    def run_all(self, fn: Callable[..., Any], tasks: Sequence[tuple]) -> list[Any]:
        """Blocking wrapper around :meth:`map`."""
        return asyncio.run(self.map(fn, tasks))

    def close(self) -> None:
        if self._executor is not None and self._owns_executor:
            self._executor.shutdown()
            self._executor = None

    def __enter__(self) -> "FramePool":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
