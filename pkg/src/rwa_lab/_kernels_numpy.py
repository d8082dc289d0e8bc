"""Pure-numpy implementations of the hot kernels.

Reference semantics for the numba twins in `_kernels_numba`; selected at
import time by `rwa_lab.backend` when RWA_LAB_BACKEND=numpy or numba is
unavailable.  Atom terms are accumulated with compensated (Kahan) summation
in the same atom order as the numba path.
"""

from __future__ import annotations

import numpy as np


def eval_piecewise_terms(zs, atoms, powers, coeffs, nterms):
    """Sum the per-atom polynomial terms of the conditional CDF at each z.

    atoms must be ascending; atom j contributes where z >= atoms[j] the value
    w^powers[j] * Horner(coeffs[j, :nterms[j]], w) with w = atoms[j] - z.
    Returns the raw (unclamped) sums.
    """
    zs = np.asarray(zs, dtype=np.float64)
    out = np.zeros_like(zs)
    comp = np.zeros_like(zs)
    for j in range(atoms.size):
        mask = zs >= atoms[j]
        if not mask.any():
            break
        w = atoms[j] - zs[mask]
        acc = np.full_like(w, coeffs[j, 0])
        for k in range(1, int(nterms[j])):
            acc = acc * w + coeffs[j, k]
        for _ in range(int(powers[j])):
            acc = acc * w
        y = acc - comp[mask]
        t = out[mask] + y
        comp[mask] = (t - out[mask]) - y
        out[mask] = t
    return out


def sorted_row_gap_stats(rows):
    """Per-row (sum of squared gaps, max gap) for sorted rows in [0, 1].

    Gaps include the leading row[0] - 0 and the trailing 1 - row[-1].
    """
    rows = np.asarray(rows, dtype=np.float64)
    gaps = np.diff(rows, axis=1, prepend=0.0, append=1.0)
    return (gaps * gaps).sum(axis=1), gaps.max(axis=1)
