"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 100000 1000000] [--nmax 8 64] [--repeat 5]

Reports the best-of-``repeat`` wall time per call and the speedup, and checks
that both backends agree before timing.
"""
import argparse
import math
import time

import numpy as np

from benfordkit import _pykernels

try:
    from benfordkit import _ckernels
except ImportError:
    _ckernels = None


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[100_000, 1_000_000])
    p.add_argument("--nmax", type=int, nargs="+", default=[8, 64])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the numpy fallback is available")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'m':>10}{'n_max':>7}{'numpy s':>12}{'cython s':>12}{'speedup':>9}")
    for m in args.sizes:
        x = np.ascontiguousarray(rng.normal(0, 3, m))
        for n_max in args.nmax:
            py = best_time(lambda: _pykernels.harmonic_sums(x, 2 * math.pi, n_max, 1), args.repeat)
            if _ckernels is not None:
                a = _ckernels.harmonic_sums(x, 2 * math.pi, n_max, 1)
                b = _pykernels.harmonic_sums(x, 2 * math.pi, n_max, 1)
                assert np.allclose(a, b, atol=1e-6 * math.sqrt(m)), "backends disagree"
                cy = best_time(lambda: _ckernels.harmonic_sums(x, 2 * math.pi, n_max, 1), args.repeat)
                print(f"{'harmonic_sums':<16}{m:>10}{n_max:>7}{py:>12.4f}{cy:>12.4f}{py / cy:>8.1f}x")
            else:
                print(f"{'harmonic_sums':<16}{m:>10}{n_max:>7}{py:>12.4f}{'-':>12}{'-':>9}")
        u = np.sort(rng.random(m))
        py = best_time(lambda: _pykernels.ks_uniform_sorted(u), args.repeat)
        if _ckernels is not None:
            cy = best_time(lambda: _ckernels.ks_uniform_sorted(u), args.repeat)
            print(f"{'ks_uniform':<16}{m:>10}{'':>7}{py:>12.4f}{cy:>12.4f}{py / cy:>8.1f}x")
        else:
            print(f"{'ks_uniform':<16}{m:>10}{'':>7}{py:>12.4f}{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()
