import os


def num_workers(capped_at=32):
    """Return the capped number of worker processes.

    Monte Carlo runs scale almost linearly with the number of workers,
    but a shared login node should not be saturated.

    Parameters
    ----------
    capped_at : int, optional
        the maximum number of workers. Default to 32.

    Returns
    -------
    the number of available CPUs, between 1 and capped_at

    """
    capped_at = max(capped_at, 1)

    # from py3.13 there is a os.process_cpu_count function
    avail_cpus = len(os.sched_getaffinity(0))

    return min(avail_cpus, capped_at)


def chunk_ranges(n_items, n_chunks):
    """Split range(n_items) into contiguous, ordered chunks.

    Parameters
    ----------
    n_items : int
        the number of items
    n_chunks : int
        the requested number of chunks, fewer are returned if there are
        not enough items

    Returns
    -------
    a list of (start, stop) tuples covering range(n_items) in order

    """
    n_chunks = max(min(n_chunks, n_items), 1)
    edges = [n_items * k // n_chunks for k in range(n_chunks + 1)]
    return [
        (start, stop)
        for start, stop in zip(edges[:-1], edges[1:], strict=True)
        if stop > start
    ]
