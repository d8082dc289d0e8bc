"""Hot-kernel backend selection.

The environment variable RWA_LAB_BACKEND picks the implementation of the
numeric inner loops:

* ``auto`` (default): numba JIT kernels when numba imports, numpy otherwise;
* ``numba``: require the JIT kernels (ImportError if numba is missing);
* ``numpy``: force the pure-numpy fallback.

Both implementations are importable directly (``rwa_lab._kernels_numba``,
``rwa_lab._kernels_numpy``) for parity tests and benchmarks; everything else
in the package goes through the aliases exported here.
"""

from __future__ import annotations

import os
import warnings

_ENV_VAR = "RWA_LAB_BACKEND"


def _resolve() -> str:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        warnings.warn(
            f"{_ENV_VAR}={choice!r} not recognized; falling back to 'auto'",
            RuntimeWarning,
            stacklevel=2,
        )
        choice = "auto"
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _resolve()

if BACKEND == "numba":
    from ._kernels_numba import eval_piecewise_terms, sorted_row_gap_stats
else:
    from ._kernels_numpy import eval_piecewise_terms, sorted_row_gap_stats

__all__ = ["BACKEND", "eval_piecewise_terms", "sorted_row_gap_stats"]
