"""Time the numba and numpy kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Run with EQMORSE_DISABLE_NUMBA=1 to see the fallback alone (the numba rows are
then skipped).
"""

import argparse
import itertools
import time

import numpy as np

from eqmorse import _accel
from eqmorse.kernels import box_filter, count_vector_partitions


def _best(fn, repeat):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def partition_case():
    # five denominators in rank 2: three free directions to enumerate
    dens = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]
    theta = (3, 2)
    targets = [t for t in itertools.product(range(0, 25), repeat=2)]
    return dens, theta, targets


def box_case():
    # Γ-like system in rank 3 over a 41^3 box
    A = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1], [1, -2, 1], [-2, 1, 1]], dtype=np.int64)
    b = np.array([-20, -20, -20, -30, -25, -25], dtype=np.int64)
    strict = np.array([0, 0, 1, 0, 1, 0], dtype=np.bool_)
    lo = np.array([-20, -20, -20], dtype=np.int64)
    hi = np.array([20, 20, 20], dtype=np.int64)
    return A, b, strict, lo, hi


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    print(f"default backend: {_accel.backend()}")

    dens, theta, targets = partition_case()
    results = {}
    for be in backends:
        t, out = _best(lambda: count_vector_partitions(dens, theta, targets, backend=be), args.repeat)
        results[be] = out
        print(f"vector partitions  {be:6s} {len(targets):6d} targets  {t * 1e3:9.2f} ms")
    if len(results) == 2:
        assert np.array_equal(results["numpy"], results["numba"])

    A, b, strict, lo, hi = box_case()
    results = {}
    for be in backends:
        t, out = _best(lambda: box_filter(A, b, strict, lo, hi, backend=be), args.repeat)
        results[be] = out
        print(f"box filter         {be:6s} {len(out):6d} points   {t * 1e3:9.2f} ms")
    if len(results) == 2:
        assert np.array_equal(results["numpy"], results["numba"])


if __name__ == "__main__":
    main()
