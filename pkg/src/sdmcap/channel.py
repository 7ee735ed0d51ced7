"""Link parameter container shared by the analytic and Monte-Carlo paths."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ChannelSpec:
    """Strongly-coupled SDM link parameters.

    mode_count     -- number of spatial/polarization modes D (>= 2)
    snr_db         -- total-signal to total-noise ratio, decibels
    sigma_mdg_db   -- std of the log-scale modal gains, decibels (>= 0)
    freq_bins      -- independent narrowband frequency bins N (>= 1)
    """

    mode_count: int
    snr_db: float
    sigma_mdg_db: float
    freq_bins: int = 1

    def __post_init__(self):
        if self.mode_count < 2:
            raise ValueError("mode_count must be >= 2")
        if self.sigma_mdg_db < 0:
            raise ValueError("sigma_mdg_db must be >= 0")
        if self.freq_bins < 1:
            raise ValueError("freq_bins must be >= 1")

    @property
    def snr_linear(self) -> float:
        """Linear-scale SNR; the single dB-to-linear conversion point."""
        return 10.0 ** (self.snr_db / 10.0)
