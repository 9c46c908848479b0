"""Time the numba and plain-numpy kernel implementations side by side.

Usage:  python3 benchmarks/bench_kernels.py [--n N] [--kicks T] [--repeat R]
"""

import argparse
import math
import time

import numpy as np

from ratchetsim import _kernels


def bench(fn, args_factory, repeat):
    # warm-up call compiles the numba path and touches the caches
    fn(*args_factory())
    best = math.inf
    for _ in range(repeat):
        args = args_factory()
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=65536,
                        help="ensemble size")
    parser.add_argument("--kicks", type=int, default=100,
                        help="map iterations")
    parser.add_argument("--steps", type=int, default=2000,
                        help="pendulum integration steps")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    theta0 = rng.uniform(-math.pi, math.pi, args.n)
    j0 = rng.uniform(-1.0, 1.0, args.n)
    weights = np.full(args.n, 1.0 / args.n)

    variants = [("numpy", _kernels.eps_map_mean_j_numpy,
                 _kernels.leapfrog_batch_numpy)]
    if _kernels.HAVE_NUMBA:
        variants.append(("numba", _kernels.eps_map_mean_j_numba,
                         _kernels.leapfrog_batch_numba))
    else:
        print("numba unavailable; timing the numpy path only")

    print(f"ensemble n = {args.n}, map kicks = {args.kicks}, "
          f"pendulum steps = {args.steps} (best of {args.repeat})")
    results = {}
    for name, map_fn, flow_fn in variants:
        t_map = bench(map_fn,
                      lambda: (theta0.copy(), j0.copy(), weights,
                               0.3, args.kicks),
                      args.repeat)
        t_flow = bench(flow_fn,
                       lambda: (theta0.copy(), j0.copy(), args.steps, 1e-3),
                       args.repeat)
        results[name] = (t_map, t_flow)
        print(f"  {name:>6}: eps map {t_map * 1e3:8.2f} ms   "
              f"pendulum flow {t_flow * 1e3:8.2f} ms")

    if len(results) == 2:
        for i, label in enumerate(("eps map", "pendulum flow")):
            speedup = results["numpy"][i] / results["numba"][i]
            print(f"  numba speedup, {label}: {speedup:.1f}x")


if __name__ == "__main__":
    main()
