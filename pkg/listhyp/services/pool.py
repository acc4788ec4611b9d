# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Worker pool for independent per-instance and per-Q_Y work items.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from listhyp.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Apply ``fn`` to every item; results come back in input order."""
    work = list(items)
    workers = min(settings.worker_count, max(1, len(work)))
    if workers == 1:
        return [fn(item) for item in work]
    logger.debug("Running %d work items on %d threads", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, work))
