"""Shared oracles and generators for the test suite."""

import numpy as np
import sympy as sp

from rwa_lab.atoms import WeightScheme, normalize


def random_configs(count, seed, max_n=4, max_nstar=6, min_gap=0.1, box=2.0):
    """Random atom configurations with bounded size and well-separated atoms."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_n + 1))
        while True:
            x = np.sort(rng.uniform(-box, box, n))
            if np.diff(x).min() >= min_gap:
                break
        m = [1] * n
        for _ in range(int(rng.integers(0, max_nstar - n + 1))):
            m[int(rng.integers(0, n))] += 1
        out.append(normalize(x, WeightScheme(tuple(m))))
    return out


def bruteforce_conditional_kernel(atoms, mults, g_of):
    """Direct symbolic evaluation of the general conditional kernel.

    Differentiates g(x_j) / prod_{i != j} (x_i - x_j)^m_i symbolically
    (m_j - 1) times in x_j, scales by (-1)^(m_j-1)/(m_j-1)!, sums over j.
    Completely independent of the series machinery.
    """
    n = len(atoms)
    xs = sp.symbols(f"x0:{n}")
    subs = {xs[i]: sp.Rational(atoms[i]) if float(atoms[i]).is_integer() else sp.Float(atoms[i], 30)
            for i in range(n)}
    total = sp.Integer(0)
    for j in range(n):
        denom = sp.prod([(xs[i] - xs[j]) ** mults[i] for i in range(n) if i != j])
        expr = g_of(xs[j]) / denom
        d = sp.diff(expr, xs[j], mults[j] - 1)
        total += (-1) ** (mults[j] - 1) / sp.factorial(mults[j] - 1) * d
    return complex(sp.N(total.subs(subs), 30))


def product_eval(factors):
    """Plain evaluator t -> prod (d + t)^e for finite-difference oracles."""
    def f(t):
        out = 1.0
        for d, e in factors:
            out *= (d + t) ** e
        return out
    return f


def repeated_central_difference(f, r, h):
    """r-th derivative at 0 by r nested central first differences."""
    def diff(g):
        return lambda t: (g(t + h) - g(t - h)) / (2 * h)
    g = f
    for _ in range(r):
        g = diff(g)
    return g(0.0)


def richardson_central_difference(f, r, h):
    """Richardson-extrapolated version: kills the h^2 term.

    Needed for r >= 3, where the plain h = 1e-4 stencil sits below the
    float64 cancellation noise floor.
    """
    coarse = repeated_central_difference(f, r, h)
    fine = repeated_central_difference(f, r, h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def ks_of_samples_vs_cdf(samples, cdf):
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    c = np.asarray(cdf(s), dtype=float)
    return float(max(np.max(np.arange(1, n + 1) / n - c),
                     np.max(c - np.arange(0, n) / n)))
