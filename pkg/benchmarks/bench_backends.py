#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

Times the hot paths that dominate the verification suites: complex-order
Bessel evaluation (scalar and batched), the entire Bessel-type series, and
the classical Kloosterman enumeration.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from kuznf import backend


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name, make_fn, repeat):
    rows = []
    for backend_name in backend.available_backends():
        impl = backend.get_backend(backend_name)
        fn = make_fn(impl)
        fn()  # warm up
        rows.append((backend_name, timeit(fn, repeat)))
    base = dict(rows).get("pure")
    print(f"{name:44s}" + "".join(
        f"  {bn}: {dt * 1e3:8.2f} ms ({base / dt:4.1f}x)" for bn, dt in rows))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    xs = np.linspace(0.05, 15.0, 400)
    mus = np.ascontiguousarray(2j * np.linspace(0.01, 8.0, 300), dtype=complex)

    print(f"active backend: {backend.BACKEND}; "
          f"available: {backend.available_backends()}\n")
    bench("bessel_k scalar x500 (mu=1.3+0.7i, x=2)",
          lambda impl: lambda: [impl.bessel_k(1.3 + 0.7j, 2.0)
                                for _ in range(500)], args.repeat)
    bench("bessel_k_xs batch of 400",
          lambda impl: lambda: impl.bessel_k_xs(1.3 + 0.7j, xs), args.repeat)
    bench("bessel_i_xs batch of 400",
          lambda impl: lambda: impl.bessel_i_xs(0.8 + 0.2j, xs), args.repeat)
    bench("bessel_j_mus batch of 300 imaginary orders",
          lambda impl: lambda: impl.bessel_j_mus(mus, 1.5), args.repeat)
    bench("j_star scalar x2000",
          lambda impl: lambda: [impl.j_star(1.2j, 0.7 + 0.3j)
                                for _ in range(2000)], args.repeat)
    bench("classical Kloosterman S(1,1;c), c<=100",
          lambda impl: lambda: [impl.classical_kloosterman(1, 1, c)
                                for c in range(1, 101)], args.repeat)


if __name__ == "__main__":
    main()
