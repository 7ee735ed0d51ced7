"""Multivariate-normal total capacity: empirical correlation model, total
mean/variance, exact mean integral, frequency diversity and outage capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .capacity import PerModeStats
from .channel import ChannelSpec
from .errors import CorrelationRangeError, DegenerateDistributionError
from .numerics import integrate, inverse_erf

CORRELATION_EXPONENT = 2.75

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class CorrelationModel:
    """Fitted coefficients of the inter-mode capacity correlation function,
    valid for one (D, SNR) pair."""

    gamma0: float
    gamma1: float
    D: int
    snr_db: float
    exponent: float = CORRELATION_EXPONENT


@dataclass(frozen=True)
class TotalCapacityStats:
    """Gaussian total-capacity parameters plus the exact mean integral."""

    mu_ct: float  # bit/s/Hz, sum of per-mode Gaussian means
    sigma_ct: float  # bit/s/Hz
    mu_ct_exact: float  # bit/s/Hz, ensemble-density mean integral (NaN if unset)
    n_bins: int = 1


def correlation(i: int, j: int, sigma_mdg_db: float,
                model: CorrelationModel) -> float:
    """Empirical correlation between the capacities of modes i and j."""
    d = abs(i - j)
    decay = math.exp(-d)
    g = model.gamma0 + model.gamma1 * sigma_mdg_db**model.exponent
    return decay + (decay - 1.0) * g


def correlation_matrix(D: int, sigma_mdg_db: float, model: CorrelationModel):
    return [
        [correlation(i, j, sigma_mdg_db, model) for j in range(1, D + 1)]
        for i in range(1, D + 1)
    ]


def total_stats(stats: PerModeStats, model: CorrelationModel,
                sigma_mdg_db: float, mu_ct_exact: float = math.nan,
                n_bins: int = 1) -> TotalCapacityStats:
    """Total-capacity Gaussian parameters from per-mode statistics and the
    correlation model.  A non-positive computed variance means the empirical
    correlation model is being used outside its fitted envelope and raises."""
    D = stats.D
    mu_ct = sum(stats.cap_means)
    var = 0.0
    for i in range(1, D + 1):
        si = stats.cap_sigmas[i - 1]
        for j in range(1, D + 1):
            var += si * stats.cap_sigmas[j - 1] * correlation(i, j, sigma_mdg_db, model)
    if any(s > 0 for s in stats.cap_sigmas) and var <= 0:
        raise CorrelationRangeError(
            f"computed total variance {var} is not positive; the correlation "
            f"model is out of its valid range"
        )
    return TotalCapacityStats(mu_ct=mu_ct, sigma_ct=math.sqrt(max(var, 0.0)),
                              mu_ct_exact=mu_ct_exact, n_bins=n_bins)


def exact_total_mean(spec: ChannelSpec, unit_variance_density, support=(-40.0, 40.0),
                     tol: float = 1e-9) -> float:
    """Exact total-capacity mean from the unit-variance zero-mean ensemble
    density of the log gains."""
    snr = spec.snr_linear
    sigma = spec.sigma_mdg_db
    if sigma == 0:
        return spec.mode_count * math.log2(1.0 + snr)

    mu = _mean_log_gain_unit(unit_variance_density, sigma, support)

    def integrand(x):
        return (math.log2(1.0 + snr * 10.0 ** ((sigma * x + mu) / 10.0))
                * unit_variance_density(x))

    return spec.mode_count * integrate(integrand, support[0], support[1],
                                       tol=tol, initial_panels=64)


def _mean_log_gain_unit(unit_variance_density, sigma_mdg_db, support):
    # mean enforcing unit linear gain, expressed via the unit-variance shape
    linear_mean = integrate(
        lambda x: 10.0 ** (sigma_mdg_db * x / 10.0) * unit_variance_density(x),
        support[0], support[1], tol=1e-10, initial_panels=64,
    )
    return -10.0 * math.log10(linear_mean)


def apply_frequency_diversity(stats: TotalCapacityStats, N: int) -> TotalCapacityStats:
    """Average over N independent frequency bins: mean unchanged, deviation
    reduced by sqrt(N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return replace(stats, sigma_ct=stats.sigma_ct / math.sqrt(N),
                   n_bins=stats.n_bins * N)


def outage_capacity(mu: float, sigma: float, p_out: float) -> float:
    """Gaussian outage capacity sqrt(2) sigma erfinv(2 p_out - 1) + mu."""
    if not 0.0 < p_out < 1.0:
        raise ValueError("p_out must lie in (0, 1)")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return mu
    return math.sqrt(2.0) * sigma * inverse_erf(2.0 * p_out - 1.0) + mu


def total_pdf(c: float, stats: TotalCapacityStats) -> float:
    """Gaussian total-capacity density."""
    if stats.sigma_ct <= 0:
        raise DegenerateDistributionError("total capacity is deterministic")
    u = (c - stats.mu_ct) / stats.sigma_ct
    return math.exp(-0.5 * u * u) / (stats.sigma_ct * _SQRT_2PI)
