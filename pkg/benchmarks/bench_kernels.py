#!/usr/bin/env python3
"""Compare the numba and numpy node-sum kernels.

Two measurements:
  kernel      best-of-N time of one weighted node sum, per kind and node count
  end-to-end  wall time of `uehling verify` on the default grid, run once with
              each backend in a fresh interpreter (the env flag is read at import)

Usage:
  python benchmarks/bench_kernels.py [--repeat 7] [--skip-e2e]
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from uehling import _kernels

CASES = [
    ("bickley n=2", _kernels.KIND_BICKLEY, 2, 1.0),
    ("bickley n=0", _kernels.KIND_BICKLEY, 0, 0.05),
    ("uehling", _kernels.KIND_UEHLING, 0, 2.0),
    ("slope", _kernels.KIND_SLOPE, 0, 2.0),
]
# the quadrature requests 1-64 nodes per call (each halving adds one
# interleaved batch); the large counts show where numpy's SIMD ufuncs win
COUNTS = (1, 8, 32, 128, 1024, 8192)


def best_time(fn, repeat):
    number = 1
    # grow the inner loop until one batch takes ~20 ms
    while timeit.timeit(fn, number=number) < 0.02 and number < 1 << 20:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(repeat):
    numba_fn = _kernels.weighted_sum_numba
    if numba_fn is None:
        print("numba is not installed; only the numpy kernel is timed")
    print(f"{'case':<14}{'nodes':>7}{'numpy [us]':>13}{'numba [us]':>13}{'speedup':>9}")
    for label, kind, n, x in CASES:
        for count in COUNTS:
            step = 8.0 / count
            args = (kind, n, x, 0.5 * step, step, count)
            t_np = best_time(lambda: _kernels.weighted_sum_numpy(*args), repeat)
            if numba_fn is None:
                print(f"{label:<14}{count:>7}{t_np * 1e6:>13.2f}{'-':>13}{'-':>9}")
                continue
            numba_fn(*args)  # compile outside the timed region
            a, b = _kernels.weighted_sum_numpy(*args), numba_fn(*args)
            if not np.isclose(a, b, rtol=1e-13, atol=0.0):
                raise SystemExit(f"backend mismatch for {label}, {count} nodes: {a!r} vs {b!r}")
            t_nb = best_time(lambda: numba_fn(*args), repeat)
            print(f"{label:<14}{count:>7}{t_np * 1e6:>13.2f}{t_nb * 1e6:>13.2f}{t_np / t_nb:>9.1f}")


def bench_end_to_end():
    print()
    print(f"{'backend':<10}{'verify [s]':>12}")
    outputs = {}
    for backend, flag in (("numpy", "1"), ("numba", "")):
        env = dict(os.environ, **{_kernels.DISABLE_ENV: flag})
        cmd = [sys.executable, "-m", "uehling", "verify", "--format", "json"]
        # warm-up run fills the numba on-disk cache
        subprocess.run(cmd, env=env, capture_output=True, check=False)
        start = time.perf_counter()
        proc = subprocess.run(cmd, env=env, capture_output=True, check=False)
        elapsed = time.perf_counter() - start
        outputs[backend] = proc.stdout
        print(f"{backend:<10}{elapsed:>12.3f}  (exit {proc.returncode})")
    same = outputs["numpy"] == outputs["numba"]
    print(f"reports byte-identical across backends: {same}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=7)
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args(argv)
    print(f"active backend at import: {_kernels.BACKEND}")
    bench_kernels(args.repeat)
    if not args.skip_e2e:
        bench_end_to_end()
    return 0


if __name__ == "__main__":
    sys.exit(main())
