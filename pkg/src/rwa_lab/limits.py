"""Empirical limit experiments: vanishing maximum spacing and the law of
large numbers for spacing-weighted averages.

Nothing here is a proof; the module measures, over many replicates, how the
maximum uniform spacing shrinks with n and how fast P(|S_n - mu| > eps)
decays when the weights are uniform spacings and the atoms are iid draws
with a finite mean.  Marginals without a mean are rejected up front, since
the summability hypothesis E|X| < inf is what the convergence rests on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import sorted_row_gap_stats
from .dists import Dist
from .errors import MeanlessMarginalError
from .mc import RngState, exact_simplex

# Replicates are processed in blocks of this many rows to bound memory
# (a block at n = 1e4 is ~40 MB).
_BLOCK = 512


@dataclass(frozen=True)
class MaxSpacingSummary:
    n: int
    replicates: int
    mean: float
    p50: float
    p95: float


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    prob_exceed: float
    prob_stderr: float
    max_spacing_mean: float
    max_spacing_p95: float


@dataclass(frozen=True)
class ConvergenceTable:
    """Per-n exceedance estimates with the matching max-spacing summaries."""

    epsilon: float
    replicates: int
    seed: int
    rows: tuple

    def __post_init__(self):
        if self.replicates < 200:
            raise ValueError(
                f"need >= 200 replicates for stable probabilities, got {self.replicates}"
            )


def _spacing_blocks(n: int, replicates: int, state: RngState):
    """Yield (sorted uniform rows, generator) per block, one substream each."""
    for c, lo in enumerate(range(0, replicates, _BLOCK)):
        hi = min(lo + _BLOCK, replicates)
        gen = state.substream(c).generator()
        rows = gen.random((hi - lo, n - 1))
        rows.sort(axis=1)
        yield rows, gen


def max_spacing_stats(n: int, replicates: int, rng) -> MaxSpacingSummary:
    """Distribution summary of the largest of the n spacings of n-1 uniforms."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    replicates = int(replicates)
    state = rng if isinstance(rng, RngState) else RngState(int(rng))
    maxima = np.empty(replicates)
    pos = 0
    for rows, _ in _spacing_blocks(n, replicates, state):
        _, mx = sorted_row_gap_stats(rows)
        maxima[pos:pos + mx.size] = mx
        pos += mx.size
    return MaxSpacingSummary(
        n=n, replicates=replicates,
        mean=float(maxima.mean()),
        p50=float(np.quantile(maxima, 0.50)),
        p95=float(np.quantile(maxima, 0.95)),
    )


def convergence_experiment(marginal: Dist, mu: float, n_grid, epsilon: float,
                           replicates: int, rng) -> ConvergenceTable:
    """Estimate P(|S_n - mu| > epsilon) along the n grid.

    S_n = sum_i R_i X_i with R the uniform spacings of n-1 points and X_i iid
    from `marginal`.  Each replicate draws fresh weights and atoms; the same
    weight rows feed the max-spacing summary, so the table doubles as the
    hypothesis check that the largest weight shrinks.
    """
    if not marginal.has_mean:
        raise MeanlessMarginalError(
            f"{marginal.name} has no finite mean: the hypothesis E|X| < inf of the "
            "weighted law of large numbers fails (it is the fixed-point case, not "
            "the convergent one)"
        )
    state = rng if isinstance(rng, RngState) else RngState(int(rng))
    replicates = int(replicates)
    rows_out = []
    for gi, n in enumerate(n_grid):
        n = int(n)
        exceed = 0
        maxima = np.empty(replicates)
        pos = 0
        for rows, gen in _spacing_blocks(n, replicates, state.substream(gi)):
            gaps = exact_simplex(np.diff(rows, axis=1, prepend=0.0, append=1.0))
            x = marginal.sample(gen, gaps.size).reshape(gaps.shape)
            s = np.einsum("ij,ij->i", gaps, x)
            exceed += int(np.count_nonzero(np.abs(s - mu) > epsilon))
            mx = gaps.max(axis=1)
            maxima[pos:pos + mx.size] = mx
            pos += mx.size
        p = exceed / replicates
        rows_out.append(ConvergenceRow(
            n=n,
            prob_exceed=p,
            prob_stderr=math.sqrt(max(p * (1.0 - p), 1.0 / replicates) / replicates),
            max_spacing_mean=float(maxima.mean()),
            max_spacing_p95=float(np.quantile(maxima, 0.95)),
        ))
    return ConvergenceTable(float(epsilon), replicates, state.seed, tuple(rows_out))
