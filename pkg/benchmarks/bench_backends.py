"""Benchmark the numba JIT kernels against the pure-numpy fallback.

Run from the repository root:

    python benchmarks/bench_backends.py

The first numba call includes JIT compilation; kernels are warmed up before
timing so the table shows steady-state throughput.
"""

import time

import numpy as np

from rwa_lab import _kernels_numpy as knp
from rwa_lab.atoms import WeightScheme, normalize
from rwa_lab.kernel import _term_table

try:
    from rwa_lab import _kernels_numba as knb
except ImportError:
    knb = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_weisberg():
    cfg = normalize([-1.6, -0.4, 0.5, 1.3], WeightScheme((2, 1, 2, 1)))
    table = _term_table(cfg)
    zs = np.linspace(-2.0, 2.0, 200_000)
    args = (zs, table.atoms, table.powers, table.coeffs, table.nterms)
    return "piecewise CDF eval (4 atoms, 2e5 z)", args, "eval_piecewise_terms"


def bench_gap_stats():
    rng = np.random.default_rng(12345)
    rows = np.sort(rng.random((2_000, 9_999)), axis=1)
    return "spacing stats (2e3 rows x 1e4)", (rows,), "sorted_row_gap_stats"


def main():
    cases = [bench_weisberg(), bench_gap_stats()]
    print(f"{'kernel':<38} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, args, fname in cases:
        np_fn = getattr(knp, fname)
        t_np = best_of(lambda: np_fn(*args))
        if knb is None:
            print(f"{label:<38} {t_np * 1e3:>8.2f}ms {'n/a':>10} {'':>8}")
            continue
        nb_fn = getattr(knb, fname)
        nb_fn(*args)  # warm-up / JIT
        t_nb = best_of(lambda: nb_fn(*args))
        a = np.asarray(np_fn(*args))
        b = np.asarray(nb_fn(*args))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-15), "backends disagree"
        print(f"{label:<38} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
