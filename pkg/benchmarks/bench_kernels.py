"""Time the compiled kernels against the numpy fallback on clustering-sized inputs.

    python3 benchmarks/bench_kernels.py --days 120 --series 6
"""
import argparse
import time

import numpy as np

from aggrex.kernels import backend


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--days", type=int, default=120)
    ap.add_argument("--series", type=int, default=6)
    ap.add_argument("--hours", type=int, default=24)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    X = rng.normal(size=(args.days, args.series, args.hours))
    F = X.reshape(args.days, -1)
    py, cy = backend("python"), backend("cython")
    D = cy.pairwise_dtw(X)
    cases = [
        ("pairwise_dtw", lambda m: m.pairwise_dtw(X)),
        ("pairwise_sqeuclid", lambda m: m.pairwise_sqeuclid(F)),
        ("complete_linkage", lambda m: m.complete_linkage(D, 4)),
    ]
    print(f"{'kernel':<20}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, call in cases:
        tp = best_of(lambda: call(py), args.repeat)
        tc = best_of(lambda: call(cy), args.repeat)
        print(f"{name:<20}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
