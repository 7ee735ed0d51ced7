"""Fixed-trace GUE spectral distribution of the log-scale modal gains.

Provides the exact-rational derivation of the density coefficients, the
ensemble density itself, the mean that enforces unit linear-scale gain, and
the per-mode Gaussian approximations obtained from the density's local
maxima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .channel import ChannelSpec
from .errors import DegenerateDistributionError, RootLocalizationError, UnsupportedOrderError
from .numerics import RationalPolynomial, find_roots, hermite, integrate

SUPPORTED_MIN = 2
SUPPORTED_MAX = 8

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GueCoefficients:
    """Normalization alpha and even-power polynomial coefficients beta of the
    ensemble log-gain density for mode count D."""

    D: int
    alpha: float
    beta: tuple  # D exact Fractions, coefficient of ((x - mu)/sigma)^(2k)


def _double_factorial_odd(j: int) -> int:
    # (2j - 1)!! with the j = 0 case equal to 1
    return math.factorial(2 * j) // (2**j * math.factorial(j))


@lru_cache(maxsize=None)
def derive_coefficients(D: int) -> GueCoefficients:
    """Exact-rational coefficients of the fixed-trace GUE log-gain density.

    The unit-variance density is assembled from the squared-Hermite sum of
    the 1-point spectral function: each H_k^2(t / (2 sqrt(D-1))) is expanded
    in even powers of the auxiliary variable t, and t^(2m) is replaced by
    H_2m(x sqrt(D (D+1) / 2)).  Only even powers survive at both steps, so
    every square root cancels and the result is a rational polynomial in
    x^2 against the Gaussian weight exp(-(D+1) x^2 / 2).  The polynomial is
    then scaled so that the density integrates to exactly 1 with
    alpha = sqrt(2 (D+1) / pi).
    """
    if not SUPPORTED_MIN <= D <= SUPPORTED_MAX:
        raise UnsupportedOrderError(
            f"coefficients are derived for {SUPPORTED_MIN} <= D <= {SUPPORTED_MAX}; "
            f"got D={D} (use the semicircle method for higher mode counts)"
        )
    s2 = Fraction(D * (D + 1), 2)  # square of the x scaling inside H_2m
    c = [Fraction(0)] * D  # coefficient of x^(2j)
    for k in range(D):
        hk2 = hermite(k) * hermite(k)  # even polynomial in u
        weight = Fraction(1, 2**k * math.factorial(k))
        for power, coeff in enumerate(hk2.coeffs):
            if coeff == 0:
                continue
            m = power // 2  # hk2 has even powers only
            t_coeff = weight * coeff / Fraction(4 * (D - 1)) ** m if m else weight * coeff
            h2m = hermite(2 * m)
            for xpow, hcoeff in enumerate(h2m.coeffs):
                if hcoeff == 0:
                    continue
                j = xpow // 2
                c[j] += t_coeff * hcoeff * s2**j

    # Gaussian moments: int exp(-(D+1) x^2 / 2) x^(2j) dx
    #                   = sqrt(2 pi / (D+1)) (2j-1)!! / (D+1)^j
    area_sum = sum(
        cj * _double_factorial_odd(j) / Fraction(D + 1) ** j for j, cj in enumerate(c)
    )
    beta = tuple(cj / (2 * area_sum) for cj in c)
    alpha = math.sqrt(2.0 * (D + 1) / math.pi)
    return GueCoefficients(D=D, alpha=alpha, beta=beta)


def unit_variance_check(coeffs: GueCoefficients) -> Fraction:
    """Exact second moment of the normalized zero-mean density (should be 1)."""
    D = coeffs.D
    return 2 * sum(
        bj * _double_factorial_odd(j + 1) / Fraction(D + 1) ** (j + 1)
        for j, bj in enumerate(coeffs.beta)
    )


def ensemble_pdf(x: float, spec: ChannelSpec, coeffs: GueCoefficients,
                 mu_lambda_db: float) -> float:
    """Ensemble log-gain density at ``x`` dB with mean ``mu_lambda_db``."""
    sigma = spec.sigma_mdg_db
    if sigma == 0:
        raise DegenerateDistributionError(
            "sigma_mdg_db = 0 yields a point mass; callers must special-case it"
        )
    u = (x - mu_lambda_db) / sigma
    u2 = u * u
    poly = 0.0
    for b in reversed(coeffs.beta):
        poly = poly * u2 + float(b)
    return coeffs.alpha / sigma * math.exp(-0.5 * (coeffs.D + 1) * u2) * poly


def zero_mean_pdf(coeffs: GueCoefficients, sigma_mdg_db: float):
    """Zero-mean ensemble density with deviation ``sigma_mdg_db``, as a callable."""
    spec = ChannelSpec(coeffs.D, 0.0, sigma_mdg_db)
    return lambda x: ensemble_pdf(x, spec, coeffs, 0.0)


def unit_variance_pdf(coeffs: GueCoefficients):
    """Unit-variance, zero-mean ensemble density shape, as a callable."""
    return zero_mean_pdf(coeffs, 1.0)


def mean_log_gain(spec: ChannelSpec, zero_mean_density, support=None,
                  tol: float = 1e-10) -> float:
    """Mean of the log-gain ensemble such that the linear-scale gain mean is 1.

    ``zero_mean_density`` is the sigma-scaled, zero-mean ensemble density
    (GUE or semicircle).  Infinite bounds are truncated to +-40 sigma; the
    Gaussian factor of the integrand decays far faster.
    """
    sigma = spec.sigma_mdg_db
    if sigma == 0:
        return 0.0
    if support is None:
        support = (-40.0 * sigma, 40.0 * sigma)
    linear_mean = integrate(
        lambda x: 10.0 ** (x / 10.0) * zero_mean_density(x),
        support[0], support[1], tol=tol, initial_panels=64,
    )
    return -10.0 * math.log10(linear_mean)


def _stationary_polynomial(coeffs: GueCoefficients):
    """Polynomial in u = (x - mu)/sigma whose roots are the stationary points
    of the ensemble density."""
    D = coeffs.D
    poly = [Fraction(0)] * (2 * D)
    for k, b in enumerate(coeffs.beta):
        if k > 0:
            poly[2 * k - 1] += 2 * k * b
        poly[2 * k + 1] -= (D + 1) * b
    return RationalPolynomial(poly)


def per_mode_means(spec: ChannelSpec, coeffs: GueCoefficients,
                   mu_lambda_db: float, window_sigmas: float = 4.0):
    """Ordered per-mode log-gain means: the odd-indexed stationary points of
    the ensemble density, i.e. its local maxima.

    Searches [mu - 4 sigma, mu + 4 sigma]; the scan grid is refined once
    before failing if fewer than 2D - 1 stationary points are found.
    """
    D = coeffs.D
    sigma = spec.sigma_mdg_db
    q = _stationary_polynomial(coeffs)
    qf = [float(cf) for cf in q.coeffs]

    def deriv(u):
        acc = 0.0
        for cf in reversed(qf):
            acc = acc * u + cf
        return acc

    expected = 2 * D - 1
    roots = []
    for grid in (4096, 16384):
        roots = find_roots(deriv, (-window_sigmas, window_sigmas),
                           grid_points=grid, tol=1e-13)
        if len(roots) == expected:
            break
    if len(roots) != expected:
        raise RootLocalizationError(
            f"expected {expected} stationary points, found {len(roots)} for D={D}"
        )
    return [mu_lambda_db + sigma * u for u in roots[0::2]]


def per_mode_sigmas(spec: ChannelSpec, coeffs: GueCoefficients,
                    mu_lambda_db: float, per_mode_means_db):
    """Per-mode log-gain deviations from the ensemble density at each mean."""
    D = coeffs.D
    sigmas = []
    for mu_i in per_mode_means_db:
        density = ensemble_pdf(mu_i, spec, coeffs, mu_lambda_db)
        if density <= 0:
            raise ZeroDivisionError(
                "ensemble density vanishes at a per-mode mean; not a valid maximum"
            )
        sigmas.append(1.0 / (D * _SQRT_2PI * density))
    return sigmas
