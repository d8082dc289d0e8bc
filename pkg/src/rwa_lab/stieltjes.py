"""Stieltjes transforms, their z-derivatives, and the product identities.

The (m-1)-th derivative of S(F, z) = int (z - x)^-1 dF(x) is evaluated as the
singular moment

    S^(m-1)(F, z) = (-1)^(m-1) (m-1)! * E[(z - X)^-m],

never by numerically differentiating S; the expectation is an adaptive
quadrature in the probability scale (x = quantile(u)), where arcsin-type
endpoint density singularities disappear.  Empirical transforms (for Monte
Carlo mixtures) are sample means of (z - s)^-m with their delta-method
standard errors carried into the residual reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .dists import Dist
from .errors import QuadratureAccuracyError, SupportDomainError
from .mc import Ecdf

# z must stay at least this far from the support of F.
DOMAIN_GUARD = 1e-6
# Absolute accuracy target for transform quadratures.
ACCURACY_TARGET = 1e-10
_TINY = 1e-300


def _support_of(f):
    if isinstance(f, Dist):
        return f.support
    samples = f.samples if isinstance(f, Ecdf) else np.asarray(f, dtype=float)
    return float(samples.min()), float(samples.max())


def _check_domain(f, z):
    lo, hi = _support_of(f)
    z = complex(z)
    dx = max(lo - z.real, 0.0, z.real - hi)
    dist = math.hypot(dx, z.imag)
    if dist < DOMAIN_GUARD:
        raise SupportDomainError(
            f"z={z} is {dist:.3g} from support [{lo:g}, {hi:g}]; need >= {DOMAIN_GUARD:g}"
        )


class TransformTerm:
    """Value of E[(z - X)^-m] with a standard error when it is empirical."""

    __slots__ = ("value", "stderr")

    def __init__(self, value, stderr=None):
        self.value = complex(value)
        self.stderr = stderr


def transform_term(f, z, m: int) -> TransformTerm:
    """E[(z - X)^-m] for a catalog distribution or an empirical sample."""
    if m < 1:
        raise ValueError(f"transform order must be >= 1, got {m}")
    _check_domain(f, z)
    z = complex(z)
    if isinstance(f, Dist):
        q = f.quantile

        def integrand(u):
            return (z - q(u)) ** -m

        re, re_err = quad(lambda u: integrand(u).real, 0.0, 1.0,
                          epsabs=1e-13, epsrel=1e-13, limit=400, full_output=1)[:2]
        im, im_err = quad(lambda u: integrand(u).imag, 0.0, 1.0,
                          epsabs=1e-13, epsrel=1e-13, limit=400, full_output=1)[:2]
        val = complex(re, im)
        err = math.hypot(re_err, im_err)
        if err > ACCURACY_TARGET:
            raise QuadratureAccuracyError(
                f"transform quadrature reached {err:.3g} > {ACCURACY_TARGET:g} "
                f"for {f.name} at z={z}, m={m}",
                estimate=val, achieved_error=err,
            )
        return TransformTerm(val)
    samples = f.samples if isinstance(f, Ecdf) else np.asarray(f, dtype=float)
    g = (z - samples) ** -m
    mean = g.mean()
    n = samples.size
    se = 0.0 if n < 2 else math.sqrt(float(np.sum(np.abs(g - mean) ** 2)) / (n * (n - 1)))
    return TransformTerm(mean, se)


def transform_deriv(f, z, m: int) -> complex:
    """S^(m-1)(F, z), the (m-1)-th z-derivative of the Stieltjes transform."""
    term = transform_term(f, z, m)
    return (-1.0) ** (m - 1) * math.factorial(m - 1) * term.value


def closed_form_transform(name: str, z) -> complex:
    """Closed-form S(F, z) for the arcsin and semicircle laws.

    The square root uses the branch sqrt(z-1)*sqrt(z+1) (principal roots),
    which makes z*S(z) -> 1 at infinity on every ray.
    """
    z = complex(z)
    if z.imag == 0.0 and -1.0 <= z.real <= 1.0:
        raise SupportDomainError(f"z={z} lies on the cut [-1, 1]")
    root = np.sqrt(z - 1.0) * np.sqrt(z + 1.0)
    if name == "arcsin":
        return 1.0 / root
    if name == "semicircle":
        # rationalized form of 2(z - root): no cancellation at large |z|
        return 2.0 / (z + root)
    raise ValueError(f"no closed form for {name!r} (arcsin|semicircle)")


@dataclass(frozen=True)
class ResidualPoint:
    z: complex
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    lhs_stderr: float = None

    def to_json_dict(self):
        d = {
            "z_re": self.z.real, "z_im": self.z.imag,
            "lhs_re": self.lhs.real, "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real, "rhs_im": self.rhs.imag,
            "abs_res": self.abs_residual, "rel_res": self.rel_residual,
        }
        if self.lhs_stderr is not None:
            d["lhs_se"] = self.lhs_stderr
        return d


@dataclass(frozen=True)
class ResidualReport:
    """Evaluation record of a transform identity at complex test points."""

    identity: str
    points: tuple = field(default_factory=tuple)

    @property
    def max_rel(self) -> float:
        return max(p.rel_residual for p in self.points)

    @property
    def max_abs(self) -> float:
        return max(p.abs_residual for p in self.points)

    def to_json_dict(self):
        return {
            "identity": self.identity,
            "points": [p.to_json_dict() for p in self.points],
        }


def _residual_point(z, lhs, rhs, lhs_stderr=None) -> ResidualPoint:
    abs_res = abs(lhs - rhs)
    rel_res = abs_res / max(abs(lhs), abs(rhs), _TINY)
    return ResidualPoint(complex(z), complex(lhs), complex(rhs),
                         float(abs_res), float(rel_res), lhs_stderr)


def theorem1_residual(scheme, marginals, mixture, z_points) -> ResidualReport:
    """Product identity of the mixture transform against the marginals.

    At each z the two sides are

        LHS = [(-1)^(nstar-1) / (nstar-1)!] * S^(nstar-1)(F_mixture, z)
            = E[(z - S)^-nstar]
        RHS = prod_i [(-1)^(m_i-1) / (m_i-1)!] * S^(m_i-1)(F_Xi, z)
            = prod_i E[(z - X_i)^-m_i]

    `mixture` may be a catalog Dist or an empirical sample (array / Ecdf); in
    the empirical case each point carries the delta-method standard error of
    the LHS.
    """
    if len(marginals) != scheme.n:
        raise ValueError(f"{len(marginals)} marginals for n={scheme.n} scheme")
    pts = []
    for z in z_points:
        lhs_term = transform_term(mixture, z, scheme.nstar)
        rhs = 1.0 + 0.0j
        for d, m in zip(marginals, scheme.multiplicities):
            rhs *= transform_term(d, z, m).value
        pts.append(_residual_point(z, lhs_term.value, rhs, lhs_term.stderr))
    label = "theorem1[m=" + ",".join(str(m) for m in scheme.multiplicities) + "]"
    return ResidualReport(label, tuple(pts))


def remark1_residual(n1: int, n2: int, fx1, fx2, fz, z_points) -> ResidualReport:
    """Two-variable transform identity

        B(n1, n2) * S^(n1+n2-1)(F_Z, z) = -S^(n1-1)(F_X1, z) * S^(n2-1)(F_X2, z)

    with B the Euler Beta function B(n1, n2) = (n1-1)! (n2-1)! / (n1+n2-1)!,
    the unique constant consistent with the n-atom product identity; at
    n1 = n2 = 1 this is the classical -S'(F_Z, z) = S(F_X, z)^2.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("orders must be positive integers")
    b = math.factorial(n1 - 1) * math.factorial(n2 - 1) / math.factorial(n1 + n2 - 1)
    pts = []
    for z in z_points:
        lhs_term = transform_term(fz, z, n1 + n2)
        pref = (-1.0) ** (n1 + n2 - 1) * math.factorial(n1 + n2 - 1)
        lhs = b * pref * lhs_term.value
        rhs = -transform_deriv(fx1, z, n1) * transform_deriv(fx2, z, n2)
        se = None if lhs_term.stderr is None else b * abs(pref) * lhs_term.stderr
        pts.append(_residual_point(z, lhs, rhs, se))
    return ResidualReport(f"remark1[n1={n1},n2={n2}]", tuple(pts))


def eq31_residual(fx, fz, z_points) -> ResidualReport:
    """The first-order special case  -S'(F_Z, z) = S(F_X, z)^2."""
    pts = []
    for z in z_points:
        lhs_term = transform_term(fz, z, 2)
        lhs = lhs_term.value  # -S'(F_Z, z) = E[(z-x)^-2]
        rhs = transform_deriv(fx, z, 1) ** 2
        se = None if lhs_term.stderr is None else lhs_term.stderr
        pts.append(_residual_point(z, lhs, rhs, se))
    return ResidualReport("eq31", tuple(pts))
