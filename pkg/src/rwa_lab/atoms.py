"""Atom configurations and multiplicity schemes for random-weight averages.

A `WeightScheme` fixes the law of the random weights (block sizes of the
selected order-statistic cuts, equivalently Dirichlet parameters).  An
`AtomConfig` pairs distinct conditioning values with such a scheme.  Tied or
nearly-tied atoms must be merged through `normalize` before the kernel can
evaluate them: equal atoms simply pool their weights, which is exact for the
induced law and avoids the catastrophic (x_i - x_j)^(-m) factors an epsilon
perturbation would create.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, ParseError, SchemeError

DEFAULT_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class WeightScheme:
    """Multiplicity vector (m_1, ..., m_n); the weights are Dirichlet(m)."""

    multiplicities: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.multiplicities)
        if len(m) < 1:
            raise SchemeError("scheme needs at least one multiplicity")
        if any(v < 1 for v in m):
            raise SchemeError(f"multiplicities must be positive integers, got {m}")
        object.__setattr__(self, "multiplicities", m)

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def nstar(self) -> int:
        return sum(self.multiplicities)

    def cut_indices(self) -> tuple:
        """Partial sums k_1 < ... < k_(n-1); inverse of `scheme_from_indices`."""
        k, acc = [], 0
        for m in self.multiplicities[:-1]:
            acc += m
            k.append(acc)
        return tuple(k)


def scheme_from_indices(nstar: int, k) -> WeightScheme:
    """Build the multiplicity vector from cut indices k_1 < ... < k_(n-1).

    Block sizes are m_j = k_j - k_(j-1) with k_0 = 0 and k_n = nstar.
    """
    nstar = int(nstar)
    if nstar < 1:
        raise SchemeError(f"nstar must be >= 1, got {nstar}")
    k = [int(v) for v in k]
    prev = 0
    for v in k:
        if v <= prev:
            raise SchemeError(f"cut indices must be strictly increasing, got {k}")
        prev = v
    if k and (k[0] < 1 or k[-1] > nstar - 1):
        raise SchemeError(f"cut indices must lie in [1, {nstar - 1}], got {k}")
    bounds = [0] + k + [nstar]
    return WeightScheme(tuple(b - a for a, b in zip(bounds, bounds[1:])))


@dataclass(frozen=True)
class AtomConfig:
    """Distinct conditioning values with their weight scheme."""

    atoms: tuple
    scheme: WeightScheme

    def __post_init__(self):
        x = tuple(float(v) for v in self.atoms)
        if len(x) != self.scheme.n:
            raise SchemeError(
                f"{len(x)} atoms but {self.scheme.n} multiplicities"
            )
        if len(set(x)) != len(x):
            raise ConditioningError(
                f"tied atoms in {x}; merge them with normalize() first"
            )
        object.__setattr__(self, "atoms", x)

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def nstar(self) -> int:
        return self.scheme.nstar

    def min_gap(self) -> float:
        xs = sorted(self.atoms)
        return min((b - a for a, b in zip(xs, xs[1:])), default=np.inf)


def normalize(x, scheme: WeightScheme, tol: float = DEFAULT_MERGE_TOL) -> AtomConfig:
    """Merge atoms closer than `tol` and pool their multiplicities.

    Clusters are chains of consecutive (sorted) atoms with gaps <= tol; each
    cluster collapses to its multiplicity-weighted mean.  Output order follows
    each cluster's first appearance in the input.  Total multiplicity is
    preserved, and the result is idempotent under further normalization.
    """
    x = [float(v) for v in x]
    m = list(scheme.multiplicities)
    if len(x) != len(m):
        raise SchemeError(f"{len(x)} atoms but {len(m)} multiplicities")
    order = sorted(range(len(x)), key=lambda i: x[i])
    clusters = [[order[0]]]
    for i in order[1:]:
        if x[i] - x[clusters[-1][-1]] <= tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    merged = []
    for idxs in clusters:
        tot = sum(m[i] for i in idxs)
        val = sum(x[i] * m[i] for i in idxs) / tot
        merged.append((min(idxs), val, tot))
    merged.sort()  # first-appearance order
    return AtomConfig(
        tuple(v for _, v, _ in merged),
        WeightScheme(tuple(t for _, _, t in merged)),
    )


def parse_atoms(text: str):
    """Parse the `x:m` comma-separated atom syntax, e.g. ``3:1,2:1,1:1``.

    Returns (values, multiplicities); callers normalize.
    """
    values, mults = [], []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ParseError(f"empty atom token in {text!r}")
        parts = token.split(":")
        if len(parts) != 2:
            raise ParseError(f"atom token {token!r} is not of the form x:m")
        try:
            values.append(float(parts[0]))
        except ValueError:
            raise ParseError(f"atom value {parts[0]!r} in token {token!r} is not a number") from None
        try:
            mult = int(parts[1])
        except ValueError:
            raise ParseError(f"multiplicity {parts[1]!r} in token {token!r} is not an integer") from None
        if mult < 1:
            raise ParseError(f"multiplicity in token {token!r} must be >= 1")
        mults.append(mult)
    if not values:
        raise ParseError(f"no atoms in {text!r}")
    return values, mults
