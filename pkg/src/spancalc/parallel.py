"""Order-preserving map over worker processes, used by the exhaustive sweeps."""

import os
from multiprocessing import get_context


def thread_count(default=1):
    try:
        return max(1, int(os.environ.get("SPANCALC_THREADS", default)))
    except ValueError:
        return default


def _call(packed):
    fn, args = packed
    return fn(*args)


def ordered_map(fn, arg_tuples, threads=None):
    """[fn(*a) for a in arg_tuples], possibly spread over processes; order is kept."""
    threads = thread_count() if threads is None else threads
    arg_tuples = list(arg_tuples)
    if threads <= 1 or len(arg_tuples) <= 1:
        return [fn(*a) for a in arg_tuples]
    with get_context("fork").Pool(min(threads, len(arg_tuples))) as pool:
        return pool.map(_call, [(fn, a) for a in arg_tuples])
