import contextlib

import numba

# try OpenMP first: an outdated system TBB is probed (and warned about) otherwise
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


def effective_threads(n_jobs):
    """Clamp a requested thread count to what numba was started with."""
    limit = numba.config.NUMBA_NUM_THREADS
    if n_jobs is None:
        return numba.get_num_threads()
    if n_jobs < 0:
        return limit
    return max(1, min(int(n_jobs), limit))


@contextlib.contextmanager
def thread_limit(n_jobs):
    previous = numba.get_num_threads()
    numba.set_num_threads(effective_threads(n_jobs))
    try:
        yield
    finally:
        numba.set_num_threads(previous)
