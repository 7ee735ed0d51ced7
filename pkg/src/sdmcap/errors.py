"""Exception hierarchy shared by all sdmcap modules."""


class SdmCapError(Exception):
    """Base class for all sdmcap errors."""


class UnsupportedOrderError(SdmCapError):
    """Mode count outside the range handled by the requested method."""


class QuadratureError(SdmCapError):
    """Adaptive quadrature exhausted its subdivision budget.

    Carries the best estimate obtained so far in ``best_estimate``.
    """

    def __init__(self, message, best_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate


class RootLocalizationError(SdmCapError):
    """Root scan found a different number of roots than required."""


class DegenerateDistributionError(SdmCapError):
    """A density was requested for a point-mass (zero-spread) distribution."""


class CalibrationError(SdmCapError):
    """Per-section gain calibration did not converge."""


class TrialError(SdmCapError):
    """A single Monte-Carlo trial failed (e.g. eigendecomposition)."""


class EnsembleError(SdmCapError):
    """Too many Monte-Carlo trials were discarded."""


class CorrelationRangeError(SdmCapError):
    """The empirical correlation model produced a non-positive variance."""


class FitError(SdmCapError):
    """Coefficient fitting failed; carries the best candidate found."""

    def __init__(self, message, best_candidate=None):
        super().__init__(message)
        self.best_candidate = best_candidate
