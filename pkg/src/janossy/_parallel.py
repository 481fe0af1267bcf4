import os
from concurrent.futures import ThreadPoolExecutor


def resolve_workers(workers=None):
    """``workers`` argument, else ``$JANOSSY_THREADS``, else 1. ``"auto"`` or 0
    means one per CPU."""
    if workers is None:
        workers = os.environ.get("JANOSSY_THREADS", "1")
    if isinstance(workers, str):
        workers = 0 if workers.strip().lower() == "auto" else int(workers)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def pmap(fn, items, workers=None):
    """Ordered map; threads only pay off with the compiled (GIL-free) kernels."""
    items = list(items)
    n = min(resolve_workers(workers), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
