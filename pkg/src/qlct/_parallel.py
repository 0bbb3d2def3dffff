"""Row-chunked execution capped by the QLCT_THREADS environment variable."""
from concurrent.futures import ThreadPoolExecutor
import os

# Fixed chunk size: the partition (and so every floating-point sum) does not
# depend on how many workers run it.
CHUNK = 8


def worker_count():
    raw = os.environ.get("QLCT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def map_chunks(fn, n):
    """Call fn(start, stop) over fixed-size chunks of range(n), in order."""
    bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
    workers = min(worker_count(), len(bounds))
    if workers <= 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))
