"""Gain-to-capacity transformation, GUE-track per-mode capacity statistics,
and the method-dispatch entry point producing PerModeStats."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import gue, wigner
from .channel import ChannelSpec
from .errors import UnsupportedOrderError
from .numerics import bisect

_LN10 = math.log(10.0)
_LN2 = math.log(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

METHOD_GUE = "gue"
METHOD_WIGNER = "wigner"
METHOD_AUTO = "auto"


@dataclass(frozen=True)
class PerModeStats:
    """Ordered per-mode Gaussian parameters for gains and capacities."""

    D: int
    method: str  # "gue" or "wigner"
    mu_lambda_db: float
    gain_means: tuple  # dB
    gain_sigmas: tuple  # dB; empty for the wigner method
    cap_means: tuple  # bit/s/Hz
    cap_sigmas: tuple  # bit/s/Hz


def capacity_from_gain(lambda_db: float, snr_linear: float) -> float:
    """Per-mode capacity log2(1 + SNR * 10^(lambda_dB / 10))."""
    if snr_linear <= 0:
        raise ValueError("snr_linear must be positive")
    return math.log2(1.0 + snr_linear * 10.0 ** (lambda_db / 10.0))


def gain_mode_pdf(x: float, mean_db: float, sigma_db: float) -> float:
    """Gaussian approximation of the i-th log-gain distribution."""
    u = (x - mean_db) / sigma_db
    return math.exp(-0.5 * u * u) / (sigma_db * _SQRT_2PI)


def per_mode_pdf(x: float, i: int, stats: PerModeStats) -> float:
    """Gaussian log-gain density of mode ``i`` (1-based)."""
    if not 1 <= i <= stats.D:
        raise ValueError("mode index out of range")
    return gain_mode_pdf(x, stats.gain_means[i - 1], stats.gain_sigmas[i - 1])


def per_mode_capacity_pdf(c: float, i: int, stats: PerModeStats,
                          snr_linear: float) -> float:
    """Capacity density of mode ``i`` by change of variables from the
    Gaussian log-gain density."""
    if c <= 0:
        return 0.0
    two_c = 2.0**c
    lam_db = 10.0 / _LN10 * math.log((two_c - 1.0) / snr_linear)
    jacobian = 10.0 * _LN2 * two_c / (_LN10 * (two_c - 1.0))
    return jacobian * per_mode_pdf(lam_db, i, stats)


def per_mode_capacity_mean(i: int, stats: PerModeStats, snr_linear: float,
                           tol: float = 1e-12) -> float:
    """Mode of the transformed capacity density: the root of the stationarity
    condition bracketed by the +-6 sigma gain window."""
    mu_i = stats.gain_means[i - 1]
    sig_i = stats.gain_sigmas[i - 1]
    if sig_i == 0.0:
        return capacity_from_gain(mu_i, snr_linear)

    def stationarity(c):
        two_c = 2.0**c
        lam_db = 10.0 / _LN10 * math.log((two_c - 1.0) / snr_linear)
        return 10.0 * two_c / (sig_i * sig_i * _LN10) * (lam_db - mu_i) + 1.0

    lo = capacity_from_gain(mu_i - 6.0 * sig_i, snr_linear)
    hi = capacity_from_gain(mu_i + 6.0 * sig_i, snr_linear)
    return bisect(stationarity, lo, hi, tol=tol)


def per_mode_capacity_sigma(i: int, stats: PerModeStats, snr_linear: float,
                            mu_ci: float) -> float:
    """Gaussian-matched capacity deviation 1 / (sqrt(2 pi) f_Ci(mu_Ci))."""
    return 1.0 / (_SQRT_2PI * per_mode_capacity_pdf(mu_ci, i, stats, snr_linear))


def per_mode_stats(spec: ChannelSpec, method: str = METHOD_AUTO) -> PerModeStats:
    """Per-mode gain and capacity statistics for a link.

    ``auto`` dispatches to the GUE track for D <= 8 and to the semicircle
    track otherwise; both can be requested explicitly (GUE only up to D = 8).
    """
    if method not in (METHOD_AUTO, METHOD_GUE, METHOD_WIGNER):
        raise ValueError(f"unknown method {method!r}")
    D = spec.mode_count
    snr = spec.snr_linear

    if spec.sigma_mdg_db == 0:
        c0 = math.log2(1.0 + snr)
        resolved = method if method != METHOD_AUTO else (
            METHOD_GUE if D <= gue.SUPPORTED_MAX else METHOD_WIGNER)
        return PerModeStats(
            D=D, method=resolved, mu_lambda_db=0.0,
            gain_means=(0.0,) * D, gain_sigmas=(0.0,) * D,
            cap_means=(c0,) * D, cap_sigmas=(0.0,) * D,
        )

    if method == METHOD_AUTO:
        method = METHOD_GUE if D <= gue.SUPPORTED_MAX else METHOD_WIGNER

    if method == METHOD_GUE:
        if D > gue.SUPPORTED_MAX:
            raise UnsupportedOrderError(
                f"GUE track supports D <= {gue.SUPPORTED_MAX}; got D={D}"
            )
        coeffs = gue.derive_coefficients(D)
        mu = gue.mean_log_gain(spec, gue.zero_mean_pdf(coeffs, spec.sigma_mdg_db))
        gain_means = gue.per_mode_means(spec, coeffs, mu)
        gain_sigmas = gue.per_mode_sigmas(spec, coeffs, mu, gain_means)
        partial = PerModeStats(
            D=D, method=METHOD_GUE, mu_lambda_db=mu,
            gain_means=tuple(gain_means), gain_sigmas=tuple(gain_sigmas),
            cap_means=(), cap_sigmas=(),
        )
        cap_means = [per_mode_capacity_mean(i, partial, snr) for i in range(1, D + 1)]
        cap_sigmas = [
            per_mode_capacity_sigma(i, partial, snr, cap_means[i - 1])
            for i in range(1, D + 1)
        ]
        return PerModeStats(
            D=D, method=METHOD_GUE, mu_lambda_db=mu,
            gain_means=tuple(gain_means), gain_sigmas=tuple(gain_sigmas),
            cap_means=tuple(cap_means), cap_sigmas=tuple(cap_sigmas),
        )

    # semicircle track
    mu = gue.mean_log_gain(
        spec,
        lambda x: wigner.semicircle_pdf(x, spec.sigma_mdg_db, 0.0),
        support=(-2.0 * spec.sigma_mdg_db, 2.0 * spec.sigma_mdg_db),
    )
    cap_means = wigner.per_mode_means_from_cdf(spec, mu)
    cap_sigmas = wigner.per_mode_sigmas_from_pdf(spec, mu, cap_means)
    gain_means = tuple(
        wigner.gain_db_from_capacity(c, snr) for c in cap_means
    )
    return PerModeStats(
        D=D, method=METHOD_WIGNER, mu_lambda_db=mu,
        gain_means=gain_means, gain_sigmas=(),
        cap_means=tuple(cap_means), cap_sigmas=tuple(cap_sigmas),
    )
