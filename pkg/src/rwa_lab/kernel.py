"""Conditional CDF of the randomly weighted average given its atom values.

Weisberg's formula expresses k(z | x_1..x_n) as a sum over atoms x_j <= z of
(m_j - 1)-th derivatives of the rational functions

    f_j(x; z) = (x - z)^(nstar - 1) / prod_{i != j} (x - x_i)^(m_i)

evaluated at x_j.  Each derivative is a truncated-series product
(`rwa_lab.series`), which makes the term a polynomial in (x_j - z); the
per-atom polynomial coefficients are precomputed once per configuration and
evaluated over whole z-grids by the backend kernels.

The general conditional kernel k(g | x) extends this from the CDF window
function to arbitrary smooth g supplied as a Taylor-coefficient provider.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Protocol

import numpy as np

from .atoms import DEFAULT_MERGE_TOL, AtomConfig, WeightScheme, normalize
from .backend import eval_piecewise_terms
from .errors import (
    BudgetError,
    ConditioningError,
    OrderMismatchError,
    SupportDomainError,
)
from .mc import RngState, sample_weights_dirichlet
from .series import (
    POLE_GUARD,
    LinearFactor,
    Series,
    reflect,
    series_mul,
    series_of_factor,
    series_one,
)

# Kernel sums may leave [0, 1] by at most this much before we call the
# configuration numerically unusable (silent clamping of larger excursions
# would hide real cancellation failures).
BAND_TOL = 1e-7


class SmoothFunctionSpec(Protocol):
    """Supplier of Taylor coefficients of g around arbitrary points.

    ``taylor(a, order)`` returns the coefficients of g(a + t) in t up to
    ``order`` inclusive; coefficients for a lower order must be a prefix of
    those for a higher one.
    """

    def taylor(self, a: float, order: int) -> np.ndarray: ...


class TaylorCallable:
    """Adapt a plain function (a, order) -> coefficients to the spec."""

    def __init__(self, fn):
        self._fn = fn

    def taylor(self, a, order):
        return np.asarray(self._fn(a, order))


class ReciprocalShift:
    """g(x) = 1/(pole - x); Taylor coefficients are (pole - a)^-(k+1)."""

    def __init__(self, pole):
        self.pole = pole

    def taylor(self, a, order):
        base = 1.0 / (self.pole - a)
        return base ** np.arange(1, order + 2)

    def __call__(self, x):
        return 1.0 / (self.pole - x)


class ShiftedPower:
    """g(x) = (shift - x)^power with real (possibly non-integer) power."""

    def __init__(self, shift, power):
        self.shift = shift
        self.power = power

    def taylor(self, a, order):
        w = self.shift - a
        dtype = complex if isinstance(w, complex) else float
        c = np.zeros(order + 1, dtype=dtype)
        c[0] = w ** self.power
        for k in range(order):
            c[k + 1] = -c[k] * (self.power - k) / ((k + 1) * w)
        return c

    def __call__(self, x):
        return (self.shift - x) ** self.power


class PolynomialSpec:
    """g(x) = sum_k coeffs[k] * x^k."""

    def __init__(self, coeffs):
        self.coeffs = np.atleast_1d(np.asarray(coeffs))

    def taylor(self, a, order):
        c = self.coeffs
        dtype = complex if np.iscomplexobj(c) or isinstance(a, complex) else float
        out = np.zeros(order + 1, dtype=dtype)
        for j, cj in enumerate(c):
            for k in range(min(j, order) + 1):
                out[k] += cj * math.comb(j, k) * a ** (j - k)
        return out

    def __call__(self, x):
        return sum(cj * x ** j for j, cj in enumerate(self.coeffs))


def constant_spec(value) -> PolynomialSpec:
    return PolynomialSpec([value])


def _factor_series_product(cfg: AtomConfig, j: int, order: int) -> Series:
    """Series of prod_{i != j} (x_j - x_i + t)^(-m_i), truncated at `order`."""
    x = cfg.atoms
    m = cfg.scheme.multiplicities
    prod = series_one(order)
    for i in range(cfg.n):
        if i == j:
            continue
        prod = series_mul(prod, series_of_factor(LinearFactor(x[j] - x[i], -m[i]), order))
    return prod


class _TermTable(NamedTuple):
    atoms: np.ndarray   # ascending
    powers: np.ndarray  # trailing power of w = x_j - z
    coeffs: np.ndarray  # Horner coefficients, row j padded to rmax+1
    nterms: np.ndarray  # valid coefficient count per row


def _term_table(cfg: AtomConfig) -> _TermTable:
    """Per-atom polynomial form of the CDF terms.

    Term j as a function of z is

        T_j(z) = sum_k C(nstar-1, k) * (x_j - z)^(nstar-1-k) * P_j[r_j - k]

    with r_j = m_j - 1 and P_j the series of `_factor_series_product`; the
    table stores it as w^(nstar-1-r_j) * Horner(coeffs_j, w).
    """
    if cfg.min_gap() < POLE_GUARD:
        raise ConditioningError(
            f"atom gap {cfg.min_gap():.3g} below {POLE_GUARD:g}; "
            "merge with normalize() before evaluating"
        )
    nstar = cfg.nstar
    order = sorted(range(cfg.n), key=lambda j: cfg.atoms[j])
    rmax = max(cfg.scheme.multiplicities) - 1
    atoms = np.empty(cfg.n)
    powers = np.empty(cfg.n, dtype=np.int64)
    nterms = np.empty(cfg.n, dtype=np.int64)
    coeffs = np.zeros((cfg.n, rmax + 1))
    for row, j in enumerate(order):
        r = cfg.scheme.multiplicities[j] - 1
        p = _factor_series_product(cfg, j, r).coeffs
        atoms[row] = cfg.atoms[j]
        powers[row] = nstar - 1 - r
        nterms[row] = r + 1
        for k in range(r + 1):
            coeffs[row, k] = math.comb(nstar - 1, k) * p[r - k]
    return _TermTable(atoms, powers, coeffs, nterms)


def weisberg_cdf_grid(cfg: AtomConfig, zs) -> np.ndarray:
    """Conditional CDF k(z | atoms) on an array of z values.

    Right-continuous: at z equal to an atom, that atom's term is included.
    Clamped to 0 below the smallest atom and 1 at/above the largest; interior
    values outside [-BAND_TOL, 1 + BAND_TOL] raise ConditioningError, values
    inside the band are clipped to [0, 1].
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    table = _term_table(cfg)
    lo, hi = table.atoms[0], table.atoms[-1]
    out = np.zeros(zs.shape)
    out[zs >= hi] = 1.0
    interior = (zs >= lo) & (zs < hi)
    if interior.any():
        raw = eval_piecewise_terms(zs[interior], *table[:4])
        bad = (raw < -BAND_TOL) | (raw > 1.0 + BAND_TOL)
        if bad.any():
            i = int(np.argmax(bad))
            raise ConditioningError(
                f"kernel sum {raw[i]:.6g} at z={zs[interior][i]:.6g} is outside "
                f"[-{BAND_TOL:g}, 1+{BAND_TOL:g}]; configuration too ill-conditioned"
            )
        out[interior] = np.clip(raw, 0.0, 1.0)
    return out


def weisberg_cdf(cfg: AtomConfig, z: float) -> float:
    """Conditional CDF k(z | atoms) at a single point."""
    return float(weisberg_cdf_grid(cfg, [z])[0])


def kernel_apply(cfg: AtomConfig, g) -> complex:
    """General conditional kernel k(g | atoms) for a smooth g.

    Evaluates   sum_j [(-1)^(m_j-1) / (m_j-1)!] *
                d^(m_j-1)/dx_j^(m_j-1) [ g(x_j) / prod_{i != j} (x_i - x_j)^(m_i) ]

    with the inner derivative computed by multiplying the Taylor series of g
    at x_j with the series of the (reflected) denominator factors.  The spec
    `g` must provide coefficients up to order max_j(m_j) - 1; it may be
    complex-valued.  Linear in g.
    """
    if cfg.min_gap() < POLE_GUARD:
        raise ConditioningError(
            f"atom gap {cfg.min_gap():.3g} below {POLE_GUARD:g}; "
            "merge with normalize() first"
        )
    x = cfg.atoms
    m = cfg.scheme.multiplicities
    taylor = g.taylor if hasattr(g, "taylor") else g
    terms = []
    for j in range(cfg.n):
        r = m[j] - 1
        coeffs = np.atleast_1d(np.asarray(taylor(x[j], r)))
        if coeffs.size < r + 1:
            raise OrderMismatchError(
                f"g supplied {coeffs.size - 1} derivative orders at x={x[j]}, need {r}"
            )
        prod = Series(coeffs[: r + 1])
        for i in range(cfg.n):
            if i == j:
                continue
            # (x_i - (x_j + t))^(-m_i) = reflected series of (x_i - x_j + t)^(-m_i)
            prod = series_mul(prod, reflect(series_of_factor(LinearFactor(x[i] - x[j], -m[i]), r)))
        terms.append((-1.0) ** r * prod.coeffs[r])
    total = math.fsum(t.real for t in terms)
    imag = math.fsum(complex(t).imag for t in terms)
    return complex(total, imag) if imag != 0.0 else total


class MixtureEstimate(NamedTuple):
    value: float
    stderr: float  # None for quadrature


def mixture_cdf_grid(scheme: WeightScheme, marginals, zs,
                     method: str = "quadrature", budget: int = 48,
                     rng=None, merge_tol: float = DEFAULT_MERGE_TOL):
    """F_S on a z grid: values array, plus a standard-error array for MC.

    The atom-vector nodes (quadrature tensor product or Monte Carlo draws)
    are built once and each node's conditional kernel is evaluated over the
    whole grid, so a grid costs barely more than a single point.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    if len(marginals) != scheme.n:
        raise BudgetError(f"{len(marginals)} marginals for n={scheme.n} scheme")
    if method == "quadrature":
        if budget < 8:
            raise BudgetError(f"quadrature needs >= 8 nodes per axis, got {budget}")
        if budget ** scheme.n > 2_000_000:
            raise BudgetError(
                f"{budget}^{scheme.n} tensor nodes is too many; use montecarlo"
            )
        for d in marginals:
            lo, hi = d.support
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise SupportDomainError(
                    f"quadrature needs compact supports; {d.name} has support {d.support}"
                )
        nodes, w = np.polynomial.legendre.leggauss(int(budget))
        u = 0.5 * (nodes + 1.0)
        w = 0.5 * w
        axis_nodes = [np.asarray(d.quantile(u), dtype=float) for d in marginals]
        total = np.zeros(zs.shape)
        comp = np.zeros(zs.shape)
        for idx in np.ndindex(*([budget] * scheme.n)):
            x = [axis_nodes[j][idx[j]] for j in range(scheme.n)]
            weight = math.prod(w[i] for i in idx)
            cfg = normalize(x, scheme, merge_tol)
            y = weight * weisberg_cdf_grid(cfg, zs) - comp
            t = total + y
            comp = (t - total) - y
            total = t
        return np.clip(total, 0.0, 1.0), None

    if method == "montecarlo":
        if budget < 1:
            raise BudgetError("montecarlo needs a positive sample budget")
        if isinstance(rng, np.random.Generator):
            gen = rng
        else:
            state = rng if isinstance(rng, RngState) else RngState(0 if rng is None else int(rng))
            gen = state.generator()
        vals = np.empty((int(budget), zs.size))
        x = np.column_stack([d.sample(gen, int(budget)) for d in marginals])
        for i in range(int(budget)):
            cfg = normalize(x[i], scheme, merge_tol)
            vals[i] = weisberg_cdf_grid(cfg, zs)
        se = vals.std(axis=0, ddof=1) / math.sqrt(budget) if budget > 1 else np.zeros(zs.size)
        return vals.mean(axis=0), se

    raise BudgetError(f"unknown method {method!r} (quadrature|montecarlo)")


def mixture_cdf(scheme: WeightScheme, marginals, z: float,
                method: str = "quadrature", budget: int = 48,
                rng=None, merge_tol: float = DEFAULT_MERGE_TOL) -> MixtureEstimate:
    """Unconditional CDF F_S(z) = E[k(z | X_1..X_n)] at a single point.

    quadrature: tensor-product Gauss-Legendre in the probability scale of
    each marginal (nodes mapped through the quantile), which absorbs
    endpoint density singularities; node vectors with near-tied coordinates
    are merged before kernel evaluation.  `budget` is nodes per axis (>= 8).

    montecarlo: averages the conditional kernel over `budget` sampled atom
    vectors; the estimate comes back with its standard error.
    """
    values, se = mixture_cdf_grid(scheme, marginals, [z], method=method,
                                  budget=budget, rng=rng, merge_tol=merge_tol)
    return MixtureEstimate(float(values[0]), None if se is None else float(se[0]))


def kernel_vs_dirichlet_sup_distance(cfg: AtomConfig, draws: int, rng) -> float:
    """Sup distance between the analytic kernel and a Dirichlet-weight ECDF.

    The oracle check: samples sum_j D_j x_j with D ~ Dirichlet(m) and compares
    its empirical CDF against `weisberg_cdf_grid` at the sample points.
    """
    from .mc import Ecdf, ks_distance

    w = sample_weights_dirichlet(cfg.scheme, rng, draws)
    s = w @ np.asarray(cfg.atoms)
    return ks_distance(Ecdf(s), lambda q: weisberg_cdf_grid(cfg, q))
