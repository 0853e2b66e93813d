#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the two hot entry points:
  * gp: a single 16x16-coefficient geometric product
  * rk4_const_field: a full free-particle integration (the inner loop that
    dominates every simulation run)

Usage: python benchmarks/bench_backends.py [--steps N] [--repeat R]
"""
import argparse
import time

import numpy as np

from zbwsim import _kernels_py
from zbwsim.blades import MULT_INDEX, MULT_SIGN, REVERSION_SIGNS

try:
    from zbwsim import _kernels_c
    _kernels_c.init_tables(MULT_INDEX, MULT_SIGN, REVERSION_SIGNS)
    BACKENDS = [("python", _kernels_py), ("c", _kernels_c)]
except ImportError:
    print("compiled kernels not importable; timing the python backend only")
    BACKENDS = [("python", _kernels_py)]


def time_gp(mod, repeat):
    rng = np.random.default_rng(1)
    pairs = [(rng.normal(size=16), rng.normal(size=16)) for _ in range(256)]
    mod.gp(*pairs[0])  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        for a, b in pairs:
            mod.gp(a, b)
    dt = time.perf_counter() - t0
    return dt / (repeat * len(pairs))


def time_rk4(mod, nsteps):
    state0 = np.zeros(24)
    state0[4] = 1.0
    state0[8] = 0.9
    state0[16] = 0.43589  # g12 slot: a generic helical spinor
    state0[23] = 0.0
    mod.rk4_const_field(state0, None, 0.0, 1e-3, 64)  # warm up
    t0 = time.perf_counter()
    out, bad = mod.rk4_const_field(state0, None, 0.0, 1e-3, nsteps)
    dt = time.perf_counter() - t0
    assert bad == -1
    return dt, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=31416,
                    help="RK4 steps (default: a 10-period run at h = 1e-3)")
    ap.add_argument("--repeat", type=int, default=40,
                    help="gp timing repeats over 256 random pairs")
    args = ap.parse_args()

    print(f"{'backend':<8} {'gp [us/call]':>14} {'rk4 total [s]':>15} "
          f"{'rk4 [us/step]':>15}")
    results = {}
    for name, mod in BACKENDS:
        gp_t = time_gp(mod, args.repeat)
        rk4_t, out = time_rk4(mod, args.steps)
        results[name] = (gp_t, rk4_t, out)
        print(f"{name:<8} {gp_t * 1e6:>14.2f} {rk4_t:>15.4f} "
              f"{rk4_t / args.steps * 1e6:>15.2f}")

    if len(results) == 2:
        gp_speedup = results["python"][0] / results["c"][0]
        rk4_speedup = results["python"][1] / results["c"][1]
        diff = np.abs(results["python"][2] - results["c"][2]).max()
        print(f"\nspeedup: gp {gp_speedup:.1f}x, rk4 {rk4_speedup:.1f}x")
        print(f"max |trajectory difference| between backends: {diff:.3e}")


if __name__ == "__main__":
    main()
