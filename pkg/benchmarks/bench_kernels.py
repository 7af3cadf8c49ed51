"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from mimo_lsa import kernels
from mimo_lsa.rng import Stream


def _lms_case(M: int, T: int):
    s = Stream(1)
    y = np.ascontiguousarray(s.complex_normal((T, M)) / np.sqrt(M))
    psi = Stream(2).qpsk(T)
    mu = 0.01 / (1.0 + np.arange(1, T + 1) / (T / 10))
    return y, psi, mu


def bench(repeat: int) -> list[tuple[str, str, float]]:
    rows = []
    backends = kernels.available_backends()
    for M, T in ((50, 10_000), (200, 10_000)):
        y, psi, mu = _lms_case(M, T)
        err = np.empty(T)
        for name, mod in backends.items():
            def run():
                c = np.zeros(M, complex)
                mod.lms_run(c, y, psi, mu, err, 1e6)
            t = min(timeit.repeat(run, number=1, repeat=repeat))
            rows.append((f"lms_run M={M} T={T}", name, t))
    u = np.random.default_rng(0).random((2, 1_000_000))
    u1, u2 = 1.0 - u[0], u[1]
    for name, mod in backends.items():
        t = min(timeit.repeat(lambda: mod.box_muller(u1, u2), number=1, repeat=repeat))
        rows.append(("box_muller n=1e6", name, t))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rows = bench(args.repeat)
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'kernel':<26}{'backend':<10}{'best (ms)':>12}")
    base = {}
    for case, name, t in rows:
        base.setdefault(case, {})[name] = t
        print(f"{case:<26}{name:<10}{1e3 * t:>12.2f}")
    for case, times in base.items():
        if {"cython", "python"} <= set(times):
            print(f"{case}: cython speedup x{times['python'] / times['cython']:.1f}")


if __name__ == "__main__":
    main()
