"""
Runner for independent numerical jobs (census rows, pump-factor scans).

Jobs never share state: each one builds, relaxes and evolves its own fields, so they can run
sequentially or in a process pool with identical results.
"""

import concurrent.futures
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Generic, Literal, TypeVar

from loguru import logger
from tqdm import tqdm

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class JobOutcome(Generic[T, R]):
    item: T
    result: R | None = None
    error: Exception | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def run_jobs(
    items: Sequence[T],
    job_fn: Callable[[T], R],
    max_workers: int = 1,
    on_error: Literal["raise", "continue"] = "raise",
    desc: str = "jobs",
    show_progress: bool = False,
) -> tuple[list[JobOutcome[T, R]], dict[str, int]]:
    """
    Run ``job_fn`` over ``items`` and collect the outcomes in input order.

    Args:
        items: Job inputs
        job_fn: Picklable callable (a module-level function) when max_workers > 1
        max_workers: 1 runs in-process; more uses a process pool
        on_error: Error handling strategy:
            - "raise": re-raise the first failure (default)
            - "continue": record the exception on its outcome and keep going
        desc: Label for logs and the progress bar
        show_progress: Show a tqdm progress bar

    Returns:
        (outcomes, stats) where stats has total, succeeded and failed counts
    """
    outcomes: list[JobOutcome[T, R]] = [JobOutcome(item=item) for item in items]
    stats = {"total": len(items), "succeeded": 0, "failed": 0}
    if not items:
        return outcomes, stats

    progress = tqdm(total=len(items), desc=desc, disable=not show_progress)

    def record(index: int, result: R | None, error: Exception | None) -> None:
        outcome = outcomes[index]
        progress.update(1)
        if error is None:
            outcome.result = result
            stats["succeeded"] += 1
            return
        outcome.error = error
        stats["failed"] += 1
        logger.error(f"{desc} #{index} ({outcome.item}) failed: {error}")
        if on_error == "raise":
            raise error

    try:
        if max_workers <= 1:
            for index, item in enumerate(items):
                try:
                    result = job_fn(item)
                except Exception as e:
                    record(index, None, e)
                else:
                    record(index, result, None)
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=max_workers) as executor:
                futures = {
                    executor.submit(job_fn, item): index for index, item in enumerate(items)
                }
                for future in concurrent.futures.as_completed(futures):
                    index = futures[future]
                    error = future.exception()
                    if error is not None and not isinstance(error, Exception):
                        raise error
                    record(index, None if error else future.result(), error)
    finally:
        progress.close()

    logger.info(f"{desc}: {stats['succeeded']}/{stats['total']} succeeded")
    return outcomes, stats
