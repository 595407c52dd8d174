#!/usr/bin/env python3
"""Side-by-side timing of the numpy and numba kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on the same inputs under both backends; outputs are
compared before timings are printed. JIT compilation is done in a warmup
call and not counted.
"""
import argparse
import math
import time

import numpy as np

from cliffvcs import kernels
from cliffvcs.fock_ops import displacement_exponent
from cliffvcs.rho_moments import canonical_rho
from cliffvcs.vcs_states import RepFamily, representation


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(0)
    # identity-resolution workload: 64 radial x 22 angular nodes, octonion, M = 10
    theta = representation(RepFamily.OCTONION_LEFT, rng.normal(size=8), 0.3).entries
    scale = canonical_rho(10).inv_sqrt(10)
    grid = kernels._numpy.power_series_grid(np.ascontiguousarray(theta), scale)
    grids = np.ascontiguousarray(np.broadcast_to(grid, (64 * 22,) + grid.shape))
    weights = rng.random(grids.shape[0])
    d = 8 * 11
    expo = displacement_exponent(representation(RepFamily.OCTONION_RIGHT, 0.1 * rng.normal(size=8), 0.5),
                                 canonical_rho(50), 50)
    expo = np.ascontiguousarray(expo)
    return [
        ("power_series_grid  n=8 M=10", "power_series_grid", (np.ascontiguousarray(theta), scale)),
        ("accumulate_projectors  1408 nodes, d=88", "accumulate_projectors",
         (grids, weights), lambda: np.zeros((d, d), np.complex128)),
        ("expm_pade13  408x408", "expm_pade13", (expo,)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    impls = kernels.implementations()
    if "numba" not in impls:
        print("numba not importable (or CLIFFVCS_NUMBA=0); timing numpy only")

    print(f"{'kernel':<42}" + "".join(f"{name + ' (ms)':>14}" for name in impls) + f"{'speedup':>10}")
    print("-" * (42 + 14 * len(impls) + 10))
    for case in cases():
        label, attr, inputs = case[:3]
        make_out = case[3] if len(case) > 3 else None
        times, results = {}, {}
        for name, mod in impls.items():
            fn = getattr(mod, attr)
            call = (lambda: fn(*inputs, make_out())) if make_out else (lambda: fn(*inputs))
            results[name] = call()  # warmup / compile
            times[name] = best_of(call, args.repeat)
        if len(results) == 2:
            ref = np.abs(results["numpy"]).max()
            gap = np.abs(results["numpy"] - results["numba"]).max() / ref
            assert gap <= 1e-12, f"{label}: backends differ by {gap:.2e}"
        speed = times["numpy"] / times["numba"] if "numba" in times else 1.0
        print(f"{label:<42}" + "".join(f"{1e3 * times[n]:>14.2f}" for n in impls) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
