"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Workloads: the Euler-Maclaurin main sum for a batch of heights near the top of
a 2001-zero table, and one meet-in-the-middle probe at n = 24.
"""

import argparse
import statistics
import time

import numpy as np

from zetaindep import kernels


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times)


def zeta_workload(impl):
    t = np.linspace(2400.0, 2550.0, 400)
    n = np.maximum(np.ceil(0.64 * t).astype(np.int64), 12)
    return lambda: impl.zeta_main_sums(t, n)


def mitm_workload(impl, n=24):
    rng = np.random.default_rng(1)
    values = rng.integers(10 ** 15, 3 * 10 ** 16, size=n, dtype=np.int64)
    h = n // 2

    def run():
        a = impl.half_sums(values[:h])
        b = impl.half_sums(values[h:])
        order = np.argsort(a, kind="stable")
        a_sorted = np.ascontiguousarray(a[order])
        skip_a = int(np.nonzero(order == (3 ** h - 1) // 2)[0][0])
        best, _, _ = impl.closest_pair(a_sorted, b, skip_a, (3 ** (n - h) - 1) // 2)
        impl.pairs_within(a_sorted, b, best + n)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    impls = kernels.implementations()
    print(f"active backend: {kernels.BACKEND}")
    if "cython" not in impls:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'workload':<28}{'backend':<10}{'best s':>10}{'median s':>10}")
    results = {}
    for label, make in (("zeta main sums (400 t)", zeta_workload), ("MITM probe n=24", mitm_workload)):
        for name, impl in sorted(impls.items()):
            best, median = best_time(make(impl), args.repeat)
            results[label, name] = best
            print(f"{label:<28}{name:<10}{best:>10.4f}{median:>10.4f}")
        if len(impls) > 1:
            print(f"{'':<28}{'speedup':<10}{results[label, 'python'] / results[label, 'cython']:>10.1f}x")


if __name__ == "__main__":
    main()
