"""
Bounded thread dispatch for independent trials.
"""

import asyncio
from typing import Callable, List, Sequence, TypeVar


T = TypeVar("T")


async def gather_in_threads(calls: Sequence[Callable[[], T]], max_workers: int) -> List[T]:
    """
    Run zero-argument callables in worker threads, at most ``max_workers``
    at a time. Results come back in the order of ``calls``.
    """
    if max_workers < 1:
        raise ValueError("max_workers must be at least 1")
    semaphore = asyncio.Semaphore(max_workers)

    async def run(call: Callable[[], T]) -> T:
        async with semaphore:
            return await asyncio.to_thread(call)

    return list(await asyncio.gather(*(run(call) for call in calls)))
