"""Catalog of the distributions used throughout the package.

Every member carries pdf, cdf, quantile and an explicit-state sampler, plus
support metadata (endpoint singularity flags drive quadrature choices).
Samplers draw from a caller-supplied ``numpy.random.Generator`` (or anything
exposing ``.generator()``, see `rwa_lab.mc.RngState`), so reproducibility is
purely the caller's stream discipline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import beta as beta_fn, betainc, betaincinv

from .errors import ParseError

_INF = float("inf")


def _as_generator(rng):
    if hasattr(rng, "generator"):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngState or numpy Generator, got {type(rng)!r}")


@dataclass(frozen=True)
class Dist:
    """A scalar distribution: density, CDF, quantile, sampler, support."""

    name: str
    pdf: callable = field(repr=False)
    cdf: callable = field(repr=False)
    quantile: callable = field(repr=False)
    sampler: callable = field(repr=False)
    support: tuple
    endpoint_singularity: tuple = (False, False)
    has_mean: bool = True
    mean: float = None
    discrete: bool = False

    def sample(self, rng, size: int) -> np.ndarray:
        """Draw `size` iid values using the given RNG state/generator."""
        return self.sampler(_as_generator(rng), int(size))


def _clipped(fn, lo, hi, below=0.0, above=1.0):
    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < lo, below, np.where(x >= hi, above, fn(np.clip(x, lo, hi))))
        return out if out.ndim else float(out)

    return cdf


def arcsin() -> Dist:
    """Arcsine law on (-1, 1): density 1/(pi*sqrt(1-x^2))."""

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(inside, 1.0 / (np.pi * np.sqrt(1.0 - x * x)), 0.0)
        out = np.where(np.abs(x) == 1.0, np.inf, val)
        return out if out.ndim else float(out)

    cdf = _clipped(lambda x: 0.5 + np.arcsin(x) / np.pi, -1.0, 1.0)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = np.sin(np.pi * (u - 0.5))
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return np.sin(np.pi * (gen.random(size) - 0.5))

    return Dist("arcsin", pdf, cdf, quantile, sampler, (-1.0, 1.0),
                endpoint_singularity=(True, True), mean=0.0)


def semicircle() -> Dist:
    """Semicircle law on [-1, 1]: density (2/pi)*sqrt(1-x^2).

    Sampling is rejection from the uniform envelope on [-1, 1] (acceptance
    rate pi/4); the quantile inverts the closed-form CDF through the
    regularized incomplete beta function.
    """

    def pdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(np.abs(x) <= 1.0, (2.0 / np.pi) * np.sqrt(np.clip(1.0 - x * x, 0.0, None)), 0.0)
        return out if out.ndim else float(out)

    cdf = _clipped(
        lambda x: 0.5 + (x * np.sqrt(1.0 - x * x)) / np.pi + np.arcsin(x) / np.pi,
        -1.0, 1.0,
    )

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = 2.0 * betaincinv(1.5, 1.5, u) - 1.0
        return out if out.ndim else float(out)

    def sampler(gen, size):
        out = np.empty(size)
        have = 0
        while have < size:
            x = gen.uniform(-1.0, 1.0, size - have)
            u = gen.random(size - have)
            acc = x[u <= np.sqrt(1.0 - x * x)]
            out[have:have + acc.size] = acc
            have += acc.size
        return out

    return Dist("semicircle", pdf, cdf, quantile, sampler, (-1.0, 1.0), mean=0.0)


def power_semicircle(p: float) -> Dist:
    """Density c_p * (1 - x^2)^p on [-1, 1], p > -1.

    The normalizer is computed by adaptive quadrature (`scipy.integrate.quad`
    with algebraic endpoint weights); the Beta-function closed form
    1/B(1/2, p+1) is only used as a cross-check in tests.  p = -1/2 is the
    arcsine law, p = 1/2 the semicircle.
    """
    p = float(p)
    if p <= -1.0:
        raise ValueError(f"power-semicircle exponent must be > -1, got {p}")
    from scipy.integrate import quad

    # integrand (1-x)^p (1+x)^p * 1 with the singular parts as QAWS weights
    mass = quad(lambda x: 1.0, -1.0, 1.0, weight="alg", wvar=(p, p))[0]
    c = 1.0 / mass

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1.0
        base = np.clip(1.0 - x * x, 0.0, None)
        with np.errstate(divide="ignore"):
            val = np.where(inside, c * base ** p, 0.0)
        if p < 0:
            val = np.where(np.abs(x) == 1.0, np.inf, val)
        return val if val.ndim else float(val)

    cdf = _clipped(lambda x: betainc(p + 1.0, p + 1.0, (x + 1.0) / 2.0), -1.0, 1.0)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = 2.0 * betaincinv(p + 1.0, p + 1.0, u) - 1.0
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return 2.0 * gen.beta(p + 1.0, p + 1.0, size) - 1.0

    return Dist(f"psc:{p:g}", pdf, cdf, quantile, sampler, (-1.0, 1.0),
                endpoint_singularity=(p < 0, p < 0), mean=0.0)


def power_dist(theta: float) -> Dist:
    """Power law on [0, 1]: density theta*v^(theta-1), CDF v^theta."""
    theta = float(theta)
    if theta <= 0:
        raise ValueError(f"power-distribution parameter must be > 0, got {theta}")

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0) & (x <= 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(inside, theta * x ** (theta - 1.0), 0.0)
        if theta < 1.0:
            val = np.where(x == 0.0, np.inf, val)
        elif theta == 1.0:
            val = np.where(x == 0.0, 1.0, val)
        return val if val.ndim else float(val)

    cdf = _clipped(lambda x: x ** theta, 0.0, 1.0)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = u ** (1.0 / theta)
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return gen.random(size) ** (1.0 / theta)

    return Dist(f"power:{theta:g}", pdf, cdf, quantile, sampler, (0.0, 1.0),
                endpoint_singularity=(theta < 1.0, False),
                mean=theta / (theta + 1.0))


def uniform(a: float, b: float) -> Dist:
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"uniform needs a < b, got a={a}, b={b}")
    width = b - a

    def pdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where((x >= a) & (x <= b), 1.0 / width, 0.0)
        return out if out.ndim else float(out)

    cdf = _clipped(lambda x: (x - a) / width, a, b)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = a + width * u
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return gen.uniform(a, b, size)

    return Dist(f"uniform:{a:g},{b:g}", pdf, cdf, quantile, sampler, (a, b),
                mean=0.5 * (a + b))


def point_mass(x0: float) -> Dist:
    """Degenerate distribution: all mass at x0."""
    x0 = float(x0)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x == x0, np.inf, 0.0)
        return out if out.ndim else float(out)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= x0, 1.0, 0.0)
        return out if out.ndim else float(out)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = np.full_like(u, x0)
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return np.full(size, x0)

    return Dist(f"point:{x0:g}", pdf, cdf, quantile, sampler, (x0, x0),
                mean=x0, discrete=True)


def cauchy(location: float = 0.0, scale: float = 1.0) -> Dist:
    """Cauchy law; has no mean, so it is rejected by the LLN experiments."""
    location, scale = float(location), float(scale)
    if scale <= 0:
        raise ValueError(f"cauchy scale must be > 0, got {scale}")

    def pdf(x):
        x = np.asarray(x, dtype=float)
        t = (x - location) / scale
        out = 1.0 / (np.pi * scale * (1.0 + t * t))
        return out if out.ndim else float(out)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = 0.5 + np.arctan((x - location) / scale) / np.pi
        return out if out.ndim else float(out)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = location + scale * np.tan(np.pi * (u - 0.5))
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return location + scale * np.tan(np.pi * (gen.random(size) - 0.5))

    return Dist(f"cauchy:{location:g},{scale:g}", pdf, cdf, quantile, sampler,
                (-_INF, _INF), has_mean=False, mean=None)


def exponential(rate: float = 1.0) -> Dist:
    rate = float(rate)
    if rate <= 0:
        raise ValueError(f"exponential rate must be > 0, got {rate}")

    def pdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, rate * np.exp(-rate * np.clip(x, 0, None)), 0.0)
        return out if out.ndim else float(out)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, -np.expm1(-rate * np.clip(x, 0, None)), 0.0)
        return out if out.ndim else float(out)

    def quantile(u):
        u = np.asarray(u, dtype=float)
        out = -np.log1p(-u) / rate
        return out if out.ndim else float(out)

    def sampler(gen, size):
        return gen.standard_exponential(size) / rate

    return Dist(f"exp:{rate:g}", pdf, cdf, quantile, sampler, (0.0, _INF),
                mean=1.0 / rate)


def parse_dist(token: str) -> Dist:
    """Parse the CLI distribution syntax.

    Accepted forms: ``arcsin``, ``semicircle``, ``psc:p``, ``uniform:a,b``,
    ``power:theta``, ``cauchy:x0,g``, ``point:x``, ``exp:rate``.
    """
    token = token.strip()
    name, _, args = token.partition(":")
    try:
        if name == "arcsin" and not args:
            return arcsin()
        if name == "semicircle" and not args:
            return semicircle()
        if name == "psc":
            return power_semicircle(float(args))
        if name == "uniform":
            a, b = (float(v) for v in args.split(","))
            return uniform(a, b)
        if name == "power":
            return power_dist(float(args))
        if name == "cauchy":
            x0, g = (float(v) for v in args.split(","))
            return cauchy(x0, g)
        if name == "point":
            return point_mass(float(args))
        if name == "exp":
            return exponential(float(args))
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad distribution token {token!r}: {exc}") from None
    raise ParseError(f"unknown distribution token {token!r}")


def parse_marginals(text: str):
    """Parse a comma-separated list of distribution tokens.

    Commas inside parameterized tokens are allowed because tokens are split
    on commas that precede a known distribution name.
    """
    names = ("arcsin", "semicircle", "psc", "uniform", "power", "cauchy", "point", "exp")
    parts = []
    for piece in text.split(","):
        piece = piece.strip()
        head = piece.partition(":")[0]
        if parts and head not in names:
            parts[-1] += "," + piece
        else:
            parts.append(piece)
    return [parse_dist(p) for p in parts]
