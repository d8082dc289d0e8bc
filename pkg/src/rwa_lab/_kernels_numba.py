"""Numba JIT implementations of the hot kernels.

Same contracts as `_kernels_numpy`; kept in lockstep (the parity tests in
tests/test_backends.py compare both on shared inputs).  fastmath stays off:
the Kahan compensation must not be optimized away.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def eval_piecewise_terms(zs, atoms, powers, coeffs, nterms):
    out = np.zeros(zs.size, dtype=np.float64)
    n = atoms.size
    for i in range(zs.size):
        z = zs[i]
        s = 0.0
        c = 0.0
        for j in range(n):
            if atoms[j] > z:
                break
            w = atoms[j] - z
            acc = coeffs[j, 0]
            for k in range(1, nterms[j]):
                acc = acc * w + coeffs[j, k]
            for _ in range(powers[j]):
                acc = acc * w
            y = acc - c
            t = s + y
            c = (t - s) - y
            s = t
        out[i] = s
    return out


@njit(cache=True)
def sorted_row_gap_stats(rows):
    nrow, ncol = rows.shape
    sq = np.empty(nrow, dtype=np.float64)
    mx = np.empty(nrow, dtype=np.float64)
    for i in range(nrow):
        prev = 0.0
        s = 0.0
        c = 0.0
        m = 0.0
        for j in range(ncol + 1):
            cur = rows[i, j] if j < ncol else 1.0
            g = cur - prev
            if g > m:
                m = g
            y = g * g - c
            t = s + y
            c = (t - s) - y
            s = t
            prev = cur
        sq[i] = s
        mx[i] = m
    return sq, mx
