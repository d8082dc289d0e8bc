"""Truncated Taylor-series arithmetic.

The one job of this module is to evaluate high-order derivatives of products
of powers of linear factors, prod_i (d_i + t)^(e_i), exactly up to float
rounding.  Everything is dense: orders never exceed the total multiplicity of
an atom configuration, which is capped well below MAX_ORDER.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OrderMismatchError, PoleError

# Orders above this indicate a caller bug (configs this large are unusable
# numerically long before the cap matters).
MAX_ORDER = 64

# Negative-exponent factors with |offset| below this would amplify rounding
# past any useful precision; fail loudly instead.  Callers deal with
# near-coincident atoms upstream (merge rule in `atoms`).
POLE_GUARD = 1e-9


@dataclass(frozen=True)
class LinearFactor:
    """One factor (offset + t)^exponent; exponent may be negative."""

    offset: float
    exponent: int


@dataclass(frozen=True)
class Series:
    """Taylor coefficients c_0..c_K of a function of t around t = 0."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs))
        if arr.ndim != 1 or arr.size == 0:
            raise OrderMismatchError("series needs a non-empty 1-d coefficient array")
        if arr.size - 1 > MAX_ORDER:
            raise OrderMismatchError(f"series order {arr.size - 1} exceeds cap {MAX_ORDER}")
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1


def series_one(order: int, dtype=np.float64) -> Series:
    """Multiplicative identity at the given truncation order."""
    c = np.zeros(order + 1, dtype=dtype)
    c[0] = 1.0
    return Series(c)


def series_of_factor(factor: LinearFactor, order: int) -> Series:
    """Taylor coefficients of (d + t)^e around t = 0, truncated at `order`.

    Nonnegative e uses exact binomial coefficients; negative e uses the
    generalized binomial recurrence, which requires d away from 0.
    """
    d, e = factor.offset, factor.exponent
    if e < 0 and abs(d) < POLE_GUARD:
        raise PoleError(
            f"factor (d + t)^{e} with |d| = {abs(d):.3g} < {POLE_GUARD:g}: "
            "expansion point is (numerically) at the pole"
        )
    c = np.zeros(order + 1)
    if e >= 0:
        if d == 0:
            if e <= order:
                c[e] = 1.0
            return Series(c)
        for k in range(min(e, order) + 1):
            c[k] = math.comb(e, k) * d ** (e - k)
        return Series(c)
    c[0] = d ** float(e)
    for k in range(order):
        c[k + 1] = c[k] * (e - k) / ((k + 1) * d)
    return Series(c)


def series_mul(a: Series, b: Series) -> Series:
    """Cauchy product truncated to the common order; orders must match."""
    if a.order != b.order:
        raise OrderMismatchError(f"order mismatch: {a.order} != {b.order}")
    full = np.convolve(a.coeffs, b.coeffs)
    return Series(full[: a.order + 1])


def reflect(a: Series) -> Series:
    """Coefficients of t -> a(-t): negate odd-degree coefficients."""
    c = a.coeffs.copy()
    c[1::2] = -c[1::2]
    return Series(c)


def derivative_of_factor_product(factors, r: int) -> float:
    """r-th derivative at t = 0 of prod_i (d_i + t)^(e_i).

    Computed as r! times the t^r coefficient of the truncated product of the
    factor series, so it is exact up to rounding (no finite differences).
    """
    if r < 0:
        raise ValueError("derivative order must be >= 0")
    prod = series_one(r)
    for f in factors:
        prod = series_mul(prod, series_of_factor(f, r))
    return math.factorial(r) * prod.coeffs[r]
