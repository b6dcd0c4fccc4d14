import contextvars
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from tqdm import tqdm

from utils.config import get_settings

T = TypeVar('T')
R = TypeVar('R')


def worker_count(requested: Optional[int] = None) -> int:
    """Number of worker threads, capped by QIOPE_THREADS and the configured limit"""
    settings = get_settings()
    cap = settings.limits.processing.max_workers
    env = os.environ.get('QIOPE_THREADS')
    if env:
        cap = min(cap, max(1, int(env)))
    if requested is not None:
        cap = min(cap, max(1, requested))
    return cap


def ordered_map(func: Callable[[T], R], items: Iterable[T], desc: Optional[str] = None,
                workers: Optional[int] = None) -> List[R]:
    """Map func over items on a thread pool; results come back in input order"""
    items = list(items)
    n_workers = worker_count(workers)
    show = (desc is not None and sys.stderr.isatty()
            and len(items) >= get_settings().limits.processing.progress_min_items)

    if n_workers == 1 or len(items) < 2:
        return [func(item) for item in tqdm(items, desc=desc, disable=not show)]

    # workers see the caller's settings override
    context = contextvars.copy_context()

    def call(item):
        return context.copy().run(func, item)

    with ThreadPoolExecutor(max_workers=n_workers) as executor:
        # executor.map yields in submission order
        return list(tqdm(executor.map(call, items), total=len(items), desc=desc, disable=not show))
