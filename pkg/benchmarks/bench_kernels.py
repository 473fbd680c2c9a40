"""Compiled vs pure-Python kernels: per-kernel timings and a full spectrum.

    python benchmarks/bench_kernels.py [--k 100] [--repeat 3]
"""
import argparse
import time

import numpy as np

from lmgstieltjes import kernels
from lmgstieltjes.jacobi import jacobi_recurrence
from lmgstieltjes.model import SpectralParams
from lmgstieltjes.recurrence import build_f_matrix, van_vleck_spectrum, van_vleck_tridiagonal
from lmgstieltjes.spectrum import solve_spectrum


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return min(ts)


def cases(k, s):
    a, b = s.jacobi_ab
    A, B, _, _ = jacobi_recurrence(k, a, b)
    d, u, l = van_vleck_tridiagonal(k, s)
    pair = van_vleck_spectrum(build_f_matrix(k, s))[k // 2]
    lc, sc = pair.jacobi_log, pair.jacobi_sign
    roots = solve_spectrum(k, s)[k // 2].roots
    k1 = int(np.sum(roots < -1))
    seed = roots * (1 + 1e-3)
    z0 = roots + 1e-2j * (1 + np.abs(roots))
    x = np.linspace(-3, 0.9, 200)
    rng = np.random.default_rng(0)
    td, te = rng.normal(size=4 * k), rng.normal(size=4 * k - 1)
    return {
        "jacobi_values (200 pts)": lambda m: m.jacobi_values(x, lc, sc, A, B),
        "aberth_jacobi": lambda m: m.aberth_jacobi(z0, lc, sc, A, B, 200, 4.0 * k * 2.2e-16),
        "twisted_log_vector": lambda m: m.twisted_log_vector(d, u, l, pair.f),
        "bae_newton": lambda m: m.bae_newton(seed, k1, s.alpha, s.beta, s.gamma, 1e-15, 200),
        f"tql_eigenvalues (n={4 * k})": lambda m: m.tql_eigenvalues(td, te),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    s = SpectralParams(1.5, 0.5, 2.0)
    avail = kernels.backends()
    print(f"k = {a.k}; backends: {', '.join(avail)}")
    print(f"{'kernel':<28}" + "".join(f"{n:>12}" for n in avail) + ("     speedup" if len(avail) > 1 else ""))
    for name, fn in cases(a.k, s).items():
        ts = [best_of(lambda: fn(m), a.repeat) for m in avail.values()]
        row = f"{name:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in ts)
        if len(ts) > 1:
            row += f"{ts[0] / ts[1]:>11.1f}x"
        print(row)
    ts = []
    for n in avail:
        with kernels.use_backend(n):
            ts.append(best_of(lambda: solve_spectrum(a.k, s), 1))
    row = f"{'full spectrum':<28}" + "".join(f"{t * 1e3:>10.0f}ms" for t in ts)
    if len(ts) > 1:
        row += f"{ts[0] / ts[1]:>11.1f}x"
    print(row)


if __name__ == "__main__":
    main()
