"""Timing comparison of the compiled and pure-Python arithmetic kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each workload times `convolve_reduce` (the hot path of quotient-ring
products) on both backends and reports the speedup.  The compiled rows
are skipped when the extension is not built.
"""

import argparse
import random
import time

from iwrank import _kernels_pure as pure

try:
    from iwrank import _kernels as compiled
except ImportError:
    compiled = None


def reduction_rows(modulus, extra):
    deg = len(modulus) - 1
    rows = []
    cur = [-c for c in modulus[:deg]]
    rows.append(list(cur))
    for _ in range(extra - 1):
        cur = [0] + cur
        lead = cur.pop()
        if lead:
            for t in range(deg):
                cur[t] += lead * rows[0][t]
        rows.append(list(cur))
    return rows


def make_workloads():
    rng = random.Random(2024)
    out = []

    # power-series products: short vectors, medium integers (p-adic digits)
    deg = 40
    bound = 11 ** 12
    modulus = [rng.randrange(-bound, bound) for _ in range(deg)] + [1]
    rows = reduction_rows(modulus, deg)
    ops = [([rng.randrange(-bound, bound) for _ in range(deg)],
            [rng.randrange(-bound, bound) for _ in range(deg)])
           for _ in range(40)]
    out.append(("series deg 40, 12-digit base-11 coefficients",
                ops, rows, deg))

    # cyclotomic products: long vectors, small integers
    deg = 1620
    modulus = [rng.randrange(-2, 3) for _ in range(deg)] + [1]
    rows = reduction_rows(modulus, deg)
    ops = [([rng.randrange(-8, 9) for _ in range(deg)],
            [rng.randrange(-8, 9) for _ in range(deg)])
           for _ in range(2)]
    out.append(("cyclotomic deg 1620, small coefficients", ops, rows, deg))

    # bignum stress: tiny vectors, 500-digit integers
    deg = 8
    bound = 10 ** 500
    modulus = [rng.randrange(-7, 8) for _ in range(deg)] + [1]
    rows = reduction_rows(modulus, deg)
    ops = [([rng.randrange(-bound, bound) for _ in range(deg)],
            [rng.randrange(-bound, bound) for _ in range(deg)])
           for _ in range(200)]
    out.append(("deg 8, 500-digit coefficients", ops, rows, deg))
    return out


def time_backend(mod, ops, rows, deg, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        for a, b in ops:
            mod.convolve_reduce(a, b, rows, deg)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repetitions per workload (best is kept)")
    args = ap.parse_args()

    print(f"{'workload':<45} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for name, ops, rows, deg in make_workloads():
        # cross-check the backends before timing them
        if compiled is not None:
            for a, b in ops[:2]:
                assert compiled.convolve_reduce(a, b, rows, deg) == \
                    pure.convolve_reduce(a, b, rows, deg)
        tp = time_backend(pure, ops, rows, deg, args.repeat)
        if compiled is None:
            print(f"{name:<45} {tp * 1e3:>8.1f}ms {'n/a':>10} {'':>8}")
            continue
        tc = time_backend(compiled, ops, rows, deg, args.repeat)
        print(f"{name:<45} {tp * 1e3:>8.1f}ms {tc * 1e3:>8.1f}ms "
              f"{tp / tc:>7.1f}x")
    if compiled is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
