import time

import numpy as np


def interleaved_medians(*fns, repeats=15):
    """Median wall time of each callable, alternating calls so load drift hits all alike."""
    for fn in fns:
        fn()
    times = [[] for _ in fns]
    for _ in range(repeats):
        for slot, fn in zip(times, fns):
            t0 = time.perf_counter()
            fn()
            slot.append(time.perf_counter() - t0)
    return [float(np.median(t)) for t in times]
