"""
The bounded worker pool suites fan out through.

Workers only ever see read-only corpora. Results are merged in
submission order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List

try:
    import finite_forge.repositories as repositories
    import finite_forge.settings as settings
except ModuleNotFoundError:
    import repositories
    import settings

logger = logging.getLogger(__name__)


class ThreadPoolTaskDispatchRepository(repositories.TaskDispatchRepository):
    def __init__(self, workers: int = 0):
        self._workers = workers or settings.FORGE_WORKERS

    def map_ordered(self, fn: Callable, items: List) -> List:
        if self._workers <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        logger.debug(f"dispatching {len(items)} tasks to {self._workers} workers")
        with ThreadPoolExecutor(max_workers=self._workers) as pool:
            return list(pool.map(fn, items))
