#!/usr/bin/env python3
"""Compare the numba multiplication kernel against the numpy fallback.

Two views:

* kernel microbenchmark (default): times the raw term-array product on
  random operands of increasing size, both backends in one process,
* ``--e2e``: times a realistic workload (inverse chains and a
  polynomial split) in subprocesses pinned to one backend each via
  ZEON_BACKEND, so import-time selection is exercised for real.

Run from the repository root:

    python3 bench/bench_backends.py
    python3 bench/bench_backends.py --e2e --reps 200
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from zeon._backend import backend_name, mul_terms, mul_terms_numpy

E2E_SNIPPET = """
import time
import numpy as np
import zeon
from zeon import Zeon, ZeonPoly, split

rng = np.random.default_rng(7)
n, reps = {n}, {reps}


def rand_invertible(scalar=2.0 + 0.1j):
    terms = [((), scalar)]
    for _ in range(min(2 ** n, 12)):
        size = int(rng.integers(1, n + 1))
        ix = tuple(sorted(rng.choice(np.arange(1, n + 1), size=size,
                                     replace=False).tolist()))
        terms.append((ix, complex(rng.normal(), rng.normal())))
    return Zeon(n, terms)


# warm any JIT work before timing
u = rand_invertible()
(u * u).inverse()
split(ZeonPoly.from_scalars(n, [2, -3, 1]))

t0 = time.perf_counter()
for _ in range(reps):
    u = rand_invertible()
    v = u * u * u
    w = v.inverse()
inv_dt = time.perf_counter() - t0

# distinct scalar parts so the split lifts four spectral zeros
poly = ZeonPoly.from_roots(n, [rand_invertible(1.5 + 0.7 * k + 0.1j)
                               for k in range(4)])
t0 = time.perf_counter()
for _ in range(max(1, reps // 10)):
    split(poly)
split_dt = time.perf_counter() - t0

print(zeon.backend_name(), inv_dt, split_dt)
"""


def random_operand(rng, n, count):
    count = min(count, 1 << n)
    masks = np.sort(rng.choice(1 << n, size=count, replace=False))
    coefs = rng.normal(size=count) + 1j * rng.normal(size=count)
    return masks.astype(np.uint64), coefs.astype(np.complex128)


def time_kernel(fn, ops, reps):
    best = []
    for ia, ca, ib, cb in ops:
        samples = []
        for _ in range(reps):
            t0 = time.perf_counter()
            fn(ia, ca, ib, cb, 1e-14)
            samples.append(time.perf_counter() - t0)
        best.append(min(samples))
    return statistics.mean(best)


def kernel_bench(reps):
    rng = np.random.default_rng(42)
    print(f"active backend: {backend_name()}")
    print(f"{'n':>3} {'terms':>6} {'numba us':>10} {'numpy us':>10} "
          f"{'speedup':>8}")
    for n, count in [(4, 16), (8, 64), (10, 256), (16, 512), (20, 1024)]:
        ops = [tuple(random_operand(rng, n, count))
               + tuple(random_operand(rng, n, count)) for _ in range(5)]
        fast = time_kernel(mul_terms, ops, reps)
        slow = time_kernel(mul_terms_numpy, ops, reps)
        print(f"{n:>3} {min(count, 1 << n):>6} {fast * 1e6:>10.1f} "
              f"{slow * 1e6:>10.1f} {slow / fast:>7.1f}x")


def e2e_bench(n, reps):
    print(f"end to end, n={n}, {reps} inverse chains per backend")
    print(f"{'backend':>8} {'inverses s':>11} {'split s':>9}")
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ZEON_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, "-c", E2E_SNIPPET.format(n=n, reps=reps)],
            env=env, capture_output=True, text=True, check=True)
        name, inv_dt, split_dt = proc.stdout.split()
        print(f"{name:>8} {float(inv_dt):>11.3f} {float(split_dt):>9.3f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--e2e", action="store_true",
                    help="time subprocess workloads instead of raw kernels")
    ap.add_argument("--reps", type=int, default=100,
                    help="repetitions per measurement (default 100)")
    ap.add_argument("--n", type=int, default=8,
                    help="generator count for --e2e (default 8)")
    args = ap.parse_args()
    if args.e2e:
        e2e_bench(args.n, args.reps)
    else:
        if backend_name() != "numba":
            print("note: numba kernel inactive; comparing fallback "
                  "against itself", file=sys.stderr)
        kernel_bench(args.reps)


if __name__ == "__main__":
    main()
