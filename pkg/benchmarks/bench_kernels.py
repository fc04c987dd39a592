#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

The two implementations are written to be bit-identical; this script times
both on the four hot loops and verifies the outputs match exactly.

Usage: python benchmarks/bench_kernels.py [n]
"""

import math
import sys
import time

import numpy as np

from rmprod._kernels import implementations


def timeit(fn, *args, repeat=3):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    impls = implementations()
    if "native" not in impls:
        print("compiled kernels not available; nothing to compare")
        return 1
    a = np.random.default_rng(0).gamma(1.0, 1.0, size=n)
    cos_a, sin_a = math.cos(math.pi / 6), math.sin(math.pi / 6)

    cases = {}

    def bench(label, call):
        rows = {}
        for name, mod in impls.items():
            rows[name] = timeit(lambda: call(mod))
        cases[label] = rows

    re, im = np.empty(n), np.empty(n)
    bench("chain_cone", lambda m: (m.chain_cone(a, cos_a, sin_a, 1.0, 0.0,
                                                re, im), re.copy(), im.copy()))
    out = np.empty(n)
    bench("chain_axis", lambda m: (m.chain_axis(a, 1.0, 0.5, out),
                                   out.copy()))
    logs = np.empty(n)
    bench("matrix_product_logs",
          lambda m: (m.matrix_product_logs(a, cos_a, sin_a, logs),
                     logs.copy()))
    wl = np.empty(n // 16 + 1)
    bench("wavefunction_logs",
          lambda m: (m.wavefunction_logs(a, 1.0, 0.0, 16, wl), wl.copy()))
    c = a[:min(n, 100_000)]
    fr, fi = np.empty(c.size), np.empty(c.size)
    lb = np.empty(c.size)
    pr, pi_ = np.empty(c.size), np.empty(c.size)
    bench("stieltjes_forward",
          lambda m: (m.stieltjes_forward(c, 0.7, 0.2, fr, fi, lb, pr, pi_),
                     fr.copy(), lb.copy()))

    print(f"n = {n} (stieltjes uses {c.size})")
    print(f"{'kernel':<22}{'native':>12}{'fallback':>12}{'speedup':>10}"
          f"{'identical':>11}")
    for label, rows in cases.items():
        tn, out_n = rows["native"]
        tf, out_f = rows["fallback"]
        same = all(np.array_equal(x, y) if isinstance(x, np.ndarray)
                   else x == y
                   for x, y in zip(out_n[1:], out_f[1:]))
        print(f"{label:<22}{tn:>11.4f}s{tf:>11.4f}s{tf / tn:>9.1f}x"
              f"{str(same):>11}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
