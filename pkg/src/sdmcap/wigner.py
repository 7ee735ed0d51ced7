"""Large-mode-count limit: semicircular gain density, closed-form capacity
PDF/CDF, and per-mode statistics derived from the CDF."""

from __future__ import annotations

import math

from .channel import ChannelSpec
from .numerics import bisect

_LN10 = math.log(10.0)
_LN2 = math.log(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def semicircle_pdf(x: float, sigma_mdg_db: float, mu_lambda_db: float) -> float:
    """Wigner semicircle density of the log gains; support mu +- 2 sigma."""
    if sigma_mdg_db <= 0:
        raise ValueError("sigma_mdg_db must be positive")
    u = (x - mu_lambda_db) / sigma_mdg_db
    if abs(u) >= 2.0:
        return 0.0
    return math.sqrt(4.0 - u * u) / (2.0 * math.pi * sigma_mdg_db)


def gain_db_from_capacity(c: float, snr_linear: float) -> float:
    """Log gain (dB) whose capacity equals ``c``; inverse of the capacity map."""
    return 10.0 / _LN10 * math.log(math.expm1(c * _LN2) / snr_linear)


def capacity_support(spec: ChannelSpec, mu_lambda_db: float):
    """Capacity interval onto which the semicircle support maps."""
    sigma = spec.sigma_mdg_db
    snr = spec.snr_linear
    lo = math.log2(snr * 10.0 ** ((mu_lambda_db - 2.0 * sigma) / 10.0) + 1.0)
    hi = math.log2(snr * 10.0 ** ((mu_lambda_db + 2.0 * sigma) / 10.0) + 1.0)
    return lo, hi


def capacity_pdf(c: float, spec: ChannelSpec, mu_lambda_db: float) -> float:
    """Ensemble capacity density in the semicircle limit; zero off support."""
    lo, hi = capacity_support(spec, mu_lambda_db)
    if not lo < c < hi:
        return 0.0
    sigma = spec.sigma_mdg_db
    two_c = 2.0**c
    lam_db = gain_db_from_capacity(c, spec.snr_linear)
    u = (lam_db - mu_lambda_db) / sigma
    radicand = 4.0 - u * u
    if radicand <= 0.0:
        return 0.0
    return (5.0 * _LN2 * two_c / (math.pi * sigma * _LN10 * (two_c - 1.0))
            * math.sqrt(radicand))


def capacity_cdf(c: float, spec: ChannelSpec, mu_lambda_db: float) -> float:
    """Closed-form capacity CDF in the semicircle limit, clamped off support."""
    lo, hi = capacity_support(spec, mu_lambda_db)
    if c <= lo:
        return 0.0
    if c >= hi:
        return 1.0
    sigma = spec.sigma_mdg_db
    z = (gain_db_from_capacity(c, spec.snr_linear) - mu_lambda_db) / (2.0 * sigma)
    z = max(-1.0, min(1.0, z))
    return 0.5 + (z * math.sqrt(1.0 - z * z) + math.asin(z)) / math.pi


def per_mode_means_from_cdf(spec: ChannelSpec, mu_lambda_db: float,
                            tol: float = 1e-12):
    """Per-mode capacity means as the (i - 1/2)/D quantiles of the ensemble CDF."""
    D = spec.mode_count
    lo, hi = capacity_support(spec, mu_lambda_db)
    means = []
    for i in range(1, D + 1):
        q = (i - 0.5) / D
        root = bisect(lambda c: capacity_cdf(c, spec, mu_lambda_db) - q,
                      lo, hi, tol=tol)
        means.append(root)
    return means


def per_mode_sigmas_from_pdf(spec: ChannelSpec, mu_lambda_db: float, means):
    """Per-mode capacity deviations from the ensemble density at each mean."""
    D = spec.mode_count
    sigmas = []
    for mu_c in means:
        density = capacity_pdf(mu_c, spec, mu_lambda_db)
        if density <= 0:
            raise ZeroDivisionError("capacity density vanished at a quantile point")
        sigmas.append(1.0 / (D * _SQRT_2PI * density))
    return sigmas
