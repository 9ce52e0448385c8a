"""Gaussian approximations to ball volumes, and exact distance cumulants.

The squared chordal distance between random subspaces concentrates around
its mean, and after centering at half its range it satisfies a central
limit theorem. Two Gaussian surrogates follow: a bulk one whose variance is
the parameter-free limit 1/16, and a finite-size one built from the exact
mean and variance. Ball volumes then reduce to differences of error
functions, and the Hellinger distance between the surrogates quantifies how
far the bulk limit is from the finite-size truth.

Cumulants of the centered distance are available two ways: closed forms for
orders one to three, and a term-by-term power-series solution of the
Painleve-type ODE satisfied by the log characteristic function, which
reaches any order in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import erf

from .exceptions import ParameterError
from .geometry import Params, canonicalize

_MAX_CUMULANT_ORDER = 16


def cumulants_closed(params: Params) -> tuple[Fraction, Fraction, Fraction]:
    """First three cumulants of d_c^2 - p/2 as exact rationals.

    The third-order formula has a removable singularity at n = 2, where the
    distance is uniform and the cumulant is zero.
    """
    c = canonicalize(params)
    n, p, q = c.n, c.p, c.q
    k1 = Fraction(p * (n - 2 * q), 2 * n)
    k2 = Fraction(p * q * (n - p) * (n - q), n * n * (n * n - 1))
    if n == 2:
        k3 = Fraction(0)
    else:
        k3 = Fraction(
            -2 * p * q * (n - 2 * p) * (n - 2 * q) * (n - p) * (n - q),
            n ** 3 * (n ** 4 - 5 * n * n + 4),
        )
    return k1, k2, k3


def _convolve(x: list[Fraction], y: list[Fraction], upto: int) -> list[Fraction]:
    out = [Fraction(0)] * (upto + 1)
    for i, xi in enumerate(x[: upto + 1]):
        if xi:
            for j in range(upto + 1 - i):
                if y[j]:
                    out[i + j] += xi * y[j]
    return out


def _ode_coefficient(s: list[Fraction], k: int, p: int, a: int, b: int) -> Fraction:
    """Coefficient of nu^k in the ODE residual for a truncated sigma series.

    The residual is (2 nu s'')^2 - (s - nu s' + 2S s')^2
    - 4 (s - nu s' - p(p+b)) (4 s'^2 - 2a s'), with S = 2p + a + b. Indices
    beyond the truncation only ever multiply coefficients that vanish
    identically (the constant term of 2 nu s'' and of s - nu s' + 2S s'),
    so padding with zeros keeps the coefficient exact.
    """
    S = 2 * p + a + b
    s = s + [Fraction(0)] * (k + 2 - len(s))
    twice_nu_s2 = [Fraction(2 * i * (i + 1)) * s[i + 1] for i in range(k + 1)]
    lin = [
        Fraction(1 - j) * s[j] + Fraction(2 * S * (j + 1)) * s[j + 1]
        for j in range(k + 1)
    ]
    ds = [Fraction(j + 1) * s[j + 1] for j in range(k + 1)]
    cen = [Fraction(1 - j) * s[j] for j in range(k + 1)]
    cen[0] = s[0] - Fraction(p * (p + b))
    quad = _convolve(ds, ds, k)
    fac = [4 * quad[j] - Fraction(2 * a) * ds[j] for j in range(k + 1)]
    return (
        _convolve(twice_nu_s2, twice_nu_s2, k)[k]
        - _convolve(lin, lin, k)[k]
        - 4 * _convolve(cen, fac, k)[k]
    )


def cumulants_recursive(params: Params, max_order: int = 6) -> tuple[Fraction, ...]:
    """Cumulants of d_c^2 - p/2 up to ``max_order`` from the ODE recursion.

    The log characteristic function's generating series solves a second
    order, second degree ODE; matching powers of nu fixes each series
    coefficient from the previous ones. Order one comes from the constant
    term, order two from the nonzero root of a quadratic, and every later
    order is linear. An order whose equation degenerates to 0 = 0 (which
    happens for odd orders in the symmetric case q - p = n - p - q) is a
    vanishing cumulant; the solver verifies the degeneracy before assigning
    zero. All arithmetic is rational, so the results are exact.
    """
    if not (1 <= max_order <= _MAX_CUMULANT_ORDER):
        raise ParameterError(
            f"max_order must be in [1, {_MAX_CUMULANT_ORDER}], got {max_order}"
        )
    c = canonicalize(params)
    p, a, b = c.p, c.a, c.b
    S = 2 * p + a + b
    s = [Fraction(p * (p + b)), Fraction(-p * (p + b), 2 * S)]
    if max_order >= 2:
        s1 = s[1]
        s.append((4 * s1 * s1 - 2 * a * s1) / (4 * (S * S - 1)))
    for k in range(3, max_order + 1):
        at_zero = _ode_coefficient(s + [Fraction(0)], k, p, a, b)
        at_one = _ode_coefficient(s + [Fraction(1)], k, p, a, b)
        slope = at_one - at_zero
        if slope == 0:
            if at_zero != 0:
                raise RuntimeError(
                    f"cumulant recursion inconsistent at order {k} for {c}"
                )
            s.append(Fraction(0))
        else:
            s.append(-at_zero / slope)
    kappas = [-2 * s[1] - Fraction(p, 2)]
    for j in range(2, max_order + 1):
        kappas.append(s[j] * (-1) ** j * 2 ** j * math.factorial(j - 1))
    return tuple(kappas[:max_order])


def expected_sq_distance(params: Params) -> Fraction:
    """Exact mean of the squared chordal distance between Haar subspaces.

    Equals p(n - q)/n for a canonical triple; this is the distortion of a
    single-codeword quantizer.
    """
    c = canonicalize(params)
    k1, _, _ = cumulants_closed(c)
    return k1 + Fraction(c.p, 2)


@dataclass(frozen=True)
class GaussianSurrogate:
    """Normal approximation to the distribution of the squared distance."""

    mean: float
    var: float

    def __post_init__(self):
        if self.var <= 0:
            raise ParameterError(f"variance must be positive, got {self.var}")

    @classmethod
    def rmt(cls, params: Params) -> "GaussianSurrogate":
        """Bulk-scaling surrogate: variance 1/16 independent of the triple."""
        c = canonicalize(params)
        return cls(mean=(c.n + 2 * c.p - 2 * c.q) / 4.0, var=1.0 / 16.0)

    @classmethod
    def finite(cls, params: Params) -> "GaussianSurrogate":
        """Surrogate matching the exact mean and variance of d_c^2."""
        c = canonicalize(params)
        k1, k2, _ = cumulants_closed(c)
        return cls(mean=float(k1 + Fraction(c.p, 2)), var=float(k2))

    def ball_volume(self, r):
        """P(0 <= d^2 <= r^2) under the surrogate, as an erf difference."""
        t = np.asarray(r, dtype=float) ** 2
        s = math.sqrt(2.0 * self.var)
        out = 0.5 * erf(self.mean / s) - 0.5 * erf((self.mean - t) / s)
        return float(out) if out.ndim == 0 else out

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(-0.5 * (x - self.mean) ** 2 / self.var) / math.sqrt(
            2.0 * math.pi * self.var
        )
        return float(out) if out.ndim == 0 else out


def volume_rmt(params: Params, r):
    """Ball volume under the bulk-scaling erf approximation."""
    return GaussianSurrogate.rmt(params).ball_volume(r)


def volume_finite(params: Params, r):
    """Ball volume under the exact-moment erf approximation."""
    return GaussianSurrogate.finite(params).ball_volume(r)


def hellinger_gaussians(g1: GaussianSurrogate, g2: GaussianSurrogate) -> float:
    """Hellinger distance between two normal distributions.

    H^2 = 1 - sqrt(2 s1 s2 / (s1^2 + s2^2)) exp(-(m1-m2)^2 / (4(s1^2+s2^2))).
    """
    v1, v2 = g1.var, g2.var
    vsum = v1 + v2
    bc = math.sqrt(2.0 * math.sqrt(v1 * v2) / vsum) * math.exp(
        -0.25 * (g1.mean - g2.mean) ** 2 / vsum
    )
    return math.sqrt(max(1.0 - bc, 0.0))


def surrogate_hellinger(params: Params) -> float:
    """Hellinger distance between the bulk and exact-moment surrogates."""
    return hellinger_gaussians(
        GaussianSurrogate.rmt(params), GaussianSurrogate.finite(params)
    )
