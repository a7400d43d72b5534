"""Compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends are called directly, so the result does not depend on
NANOTUBE_SPECTRA_PURE_PYTHON.  Outputs are compared before timing.
"""

import argparse
import time

import numpy as np

from nanotube_spectra import _kernels_py as py

try:
    from nanotube_spectra import _kernels as cy
except ImportError:  # extension not built
    cy = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if cy is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1

    rows = []
    for p, q, k in [(5, 0, 8), (5, 1, 10), (7, 3, 12), (6, 4, 14)]:
        a, b = cy.seven_multinomial_sum(p, q, k), py.seven_multinomial_sum(p, q, k)
        assert a == b, (p, q, k, a, b)
        tc = best_of(lambda: cy.seven_multinomial_sum(p, q, k), args.repeat)
        tp = best_of(lambda: py.seven_multinomial_sum(p, q, k), args.repeat)
        rows.append((f"seven_multinomial p={p} q={q} k={k}", tc, tp))

    rng = np.random.default_rng(0)
    for n in (32, 82, 132):
        m = rng.normal(size=(n, n))
        m = m + m.T
        dc = np.sort(cy.jacobi_eigen(m, 1e-13, 60, False)[0])
        dp = np.sort(py.jacobi_eigen(m, 1e-13, 60, False)[0])
        assert np.allclose(dc, dp, atol=1e-10)
        tc = best_of(lambda: cy.jacobi_eigen(m, 1e-13, 60, False), args.repeat)
        tp = best_of(lambda: py.jacobi_eigen(m, 1e-13, 60, False), args.repeat)
        rows.append((f"jacobi_eigen n={n}", tc, tp))

    print(f"{'kernel':40s} {'cython [s]':>12s} {'python [s]':>12s} {'speed-up':>9s}")
    for name, tc, tp in rows:
        print(f"{name:40s} {tc:12.5f} {tp:12.5f} {tp / tc:9.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
