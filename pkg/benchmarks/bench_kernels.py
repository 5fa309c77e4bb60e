"""Time each kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Prints one row per kernel: best wall time per backend and the speedup.
Compilation happens once before timing (and is cached on disk).
"""
import argparse
import time

import numpy as np

from critline import kernels
from critline.criteria import redheffer_matrix


def cases(quick):
    n = 10**4 if quick else 10**5
    sieve = 10**5 if quick else 10**6
    z = complex(0.5, 14.134725)
    terms = np.exp(1j * np.arange(n)) / (1.0 + np.arange(n))
    red = redheffer_matrix(150 if quick else 300)
    return [
        ("neumaier_sum", lambda k: k.neumaier_sum(terms)),
        ("dirichlet_sum", lambda k: k.dirichlet_sum(z + 1.5, 1, n)),
        ("integral_sum k=1", lambda k: k.integral_sum(z, 1, 1, n, 72)),
        ("integral_sum k=6", lambda k: k.integral_sum(z, 6, 1, n, 92)),
        ("mobius_sieve", lambda k: k.mobius_sieve(sieve)),
        ("sigma_sieve", lambda k: k.sigma_sieve(sieve)),
        ("harmonic_numbers", lambda k: k.harmonic_numbers(sieve)),
        (f"bareiss_det n={red.shape[0]}", lambda k: k.bareiss_det(red.copy())),
    ]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller problem sizes")
    a = ap.parse_args(argv)
    if kernels.NUMBA is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rows = []
    for name, fn in cases(a.quick):
        fn(kernels.NUMBA)  # compile
        t_nb = best_of(lambda: fn(kernels.NUMBA), a.repeat)
        t_np = best_of(lambda: fn(kernels.NUMPY), a.repeat)
        rows.append((name, t_nb, t_np))
    w = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{w}}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}")
    for name, t_nb, t_np in rows:
        print(f"{name:<{w}}  {t_nb:10.4f}  {t_np:10.4f}  {t_np / t_nb:8.1f}")
    return rows


if __name__ == "__main__":
    main()
