"""Random-weight and randomly-weighted-average sampling, ECDFs, KS distances.

This is the universal oracle for the analytic components: everything the
kernel or transform modules claim can be cross-checked against samples built
here.  All randomness flows through counter-based Philox streams keyed by an
explicit (seed, stream) pair, so every experiment is reproducible bit for bit
and parallel replication is a matter of handing out distinct streams.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .atoms import WeightScheme
from .errors import RwaLabError

_MASK64 = (1 << 64) - 1

# Fixed work unit for large sample requests: chunk c of a request draws from
# substream c, so results are independent of thread count and identical to a
# serial run.
CHUNK = 1 << 16


@dataclass(frozen=True)
class RngState:
    """Counter-based RNG state: (seed, stream) keys a Philox generator."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = [self.seed & _MASK64, self.stream & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RngState":
        """Derived child state: stream' = stream * 2^32 + index (mod 2^64).

        Collision-free as long as parent streams stay below 2^32 and child
        indices below 2^32, which is the discipline used package-wide.
        """
        return RngState(self.seed, ((self.stream << 32) + index) & _MASK64)


def _as_state(rng) -> RngState:
    if isinstance(rng, RngState):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngState(int(rng))
    raise TypeError(f"expected RngState or integer seed, got {type(rng)!r}")


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous empirical CDF over a sorted sample."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float))
        if s.size == 0:
            raise ValueError("empty sample")
        object.__setattr__(self, "samples", s)

    @property
    def count(self) -> int:
        return self.samples.size

    def __call__(self, x):
        idx = np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right")
        out = idx / self.count
        return out if out.ndim else float(out)


def exact_simplex(w: np.ndarray) -> np.ndarray:
    """Renormalize rows in place so each sums to exactly 1.0.

    Divides by the row sum, then pins the last coordinate to 1 minus the
    rest; the final addition then rounds to exactly 1.0 (the adjustment is
    below one ulp of the coordinate).
    """
    w /= w.sum(axis=1, keepdims=True)
    if w.shape[1] > 1:
        w[:, -1] = 1.0 - w[:, :-1].sum(axis=1)
    else:
        w[:, 0] = 1.0
    return w


def sample_weights_dirichlet(scheme: WeightScheme, rng, size: int) -> np.ndarray:
    """Weights distributed as the selected order-statistic increments.

    Uniform order-statistic spacings grouped in blocks of sizes m_j are
    jointly Dirichlet(m_1, ..., m_n), so we draw normalized Gamma variates.
    Rows are renormalized to sum to exactly 1.
    """
    gen = _as_state(rng).generator() if not isinstance(rng, np.random.Generator) else rng
    m = np.asarray(scheme.multiplicities, dtype=float)
    g = gen.gamma(shape=m, size=(int(size), scheme.n))
    return exact_simplex(g)


def sample_weights_orderstat(scheme: WeightScheme, rng, size: int) -> np.ndarray:
    """Literal construction: sort nstar-1 uniforms, difference at the cuts.

    Exists to witness that the Dirichlet path has the right law; it is the
    construction the weights are defined by.
    """
    gen = _as_state(rng).generator() if not isinstance(rng, np.random.Generator) else rng
    size = int(size)
    nstar = scheme.nstar
    u = gen.random((size, nstar - 1)) if nstar > 1 else np.empty((size, 0))
    u.sort(axis=1)
    padded = np.empty((size, nstar + 1))
    padded[:, 0] = 0.0
    padded[:, 1:-1] = u
    padded[:, -1] = 1.0
    cuts = np.array((0,) + scheme.cut_indices() + (nstar,), dtype=int)
    return np.diff(padded[:, cuts], axis=1)


def sample_rwa(scheme: WeightScheme, marginals, count: int, rng,
               threads: int = 1) -> np.ndarray:
    """Draw `count` realizations of sum_j R_j * X_j.

    Atom draws are independent of the weights and of each other.  Work is cut
    into fixed-size chunks, chunk c drawing from ``rng.substream(c)``, so the
    result depends only on (seed, stream, count), never on `threads`.
    """
    if len(marginals) != scheme.n:
        raise RwaLabError(
            f"{len(marginals)} marginals for a scheme with {scheme.n} blocks"
        )
    state = _as_state(rng)
    count = int(count)
    if count == 0:
        return np.empty(0)

    spans = [(lo, min(lo + CHUNK, count)) for lo in range(0, count, CHUNK)]

    def one_chunk(args):
        c, (lo, hi) = args
        gen = state.substream(c).generator()
        k = hi - lo
        w = sample_weights_dirichlet(scheme, gen, k)
        x = np.column_stack([d.sample(gen, k) for d in marginals])
        s = np.einsum("ij,ij->i", w, x)
        lo_x, hi_x = x.min(axis=1), x.max(axis=1)
        if np.any(s < lo_x - 1e-12) or np.any(s > hi_x + 1e-12):
            raise RwaLabError("convexity violated: sample left its atom hull")
        return s

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one_chunk, enumerate(spans)))
    else:
        parts = [one_chunk(item) for item in enumerate(spans)]
    return np.concatenate(parts)


def ks_distance(e: Ecdf, other) -> float:
    """Sup distance between an ECDF and a CDF (Dist / callable) or another ECDF.

    Jumps are evaluated from both sides against a continuous CDF; two ECDFs
    are compared at the union of their jump points.
    """
    s = e.samples
    n = e.count
    if isinstance(other, Ecdf):
        pts = np.concatenate([s, other.samples])
        return float(np.max(np.abs(e(pts) - other(pts))))
    cdf = other.cdf if hasattr(other, "cdf") else other
    c = np.asarray(cdf(s), dtype=float)
    hi = np.max(np.arange(1, n + 1) / n - c)
    lo = np.max(c - np.arange(0, n) / n)
    return float(max(hi, lo))
