import math

import pytest

from sdmcap import fitting
from sdmcap.channel import ChannelSpec
from sdmcap.errors import FitError
from sdmcap.mc import McConfig, run_ensemble
from sdmcap.total import CORRELATION_EXPONENT

GAMMA0 = 0.43513127
GAMMA1 = 3.758373e-5
GRID = [1.0, 2.5, 5.0, 7.5]


def analytic_variances(D, snr_db, sigmas, gamma0, gamma1):
    provider = fitting.default_per_mode_provider(D, snr_db)
    out = []
    for s in sigmas:
        a, b = fitting._variance_terms(D, provider(s).cap_sigmas)
        out.append(a + b * (gamma0 + gamma1 * s**CORRELATION_EXPONENT))
    return out


class TestMsle:
    def test_identical_sequences(self):
        assert fitting.msle([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_single_log_unit(self):
        assert fitting.msle([math.e], [1.0]) == pytest.approx(1.0, abs=1e-12)

    def test_two_point_value(self):
        expected = (math.log(4.0) ** 2 + math.log(9.0) ** 2) / 2.0
        assert fitting.msle([4.0, 9.0], [1.0, 1.0]) == pytest.approx(
            expected, abs=1e-12)
        assert expected == pytest.approx(3.375, abs=0.001)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            fitting.msle([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            fitting.msle([], [])
        with pytest.raises(ValueError):
            fitting.msle([0.0], [1.0])
        with pytest.raises(ValueError):
            fitting.msle([1.0], [-1.0])


class TestFit:
    def test_recovers_synthetic_coefficients(self):
        synth = analytic_variances(6, 10.0, GRID, GAMMA0, GAMMA1)
        model = fitting.fit(6, 10.0, GRID, synth)
        assert model.gamma0 == pytest.approx(GAMMA0, abs=1e-6)
        assert model.gamma1 == pytest.approx(GAMMA1, abs=1e-6)

    def test_positive_gamma1_recovered_as_positive(self):
        synth = analytic_variances(6, 10.0, GRID, 0.4, 2e-4)
        model = fitting.fit(6, 10.0, GRID, synth)
        assert model.gamma1 == pytest.approx(2e-4, rel=1e-6)
        assert model.gamma1 > 0

    def test_idempotent_on_own_predictions(self):
        spec_vars = []
        oracle = []
        for s in GRID:
            config = McConfig(ChannelSpec(6, 10.0, s), trials=500, seed=12)
            oracle.append(run_ensemble(config).total_var)
        first = fitting.fit(6, 10.0, GRID, oracle)
        predictions = analytic_variances(6, 10.0, GRID,
                                         first.gamma0, first.gamma1)
        second = fitting.fit(6, 10.0, GRID, predictions)
        assert second.gamma0 == pytest.approx(first.gamma0, abs=1e-8)
        assert second.gamma1 == pytest.approx(first.gamma1, abs=1e-8)

    def test_oracle_fit_quality_and_monotonicity(self):
        sigmas = [1.0, 2.5, 5.0]
        oracle = [
            run_ensemble(McConfig(ChannelSpec(6, 10.0, s), trials=1000,
                                  seed=3)).total_var
            for s in sigmas
        ]
        model = fitting.fit(6, 10.0, sigmas, oracle)
        fitted = analytic_variances(6, 10.0, sigmas,
                                    model.gamma0, model.gamma1)
        assert fitting.msle(fitted, oracle) <= 0.05
        # smallest-sigma anchor is matched exactly
        assert fitted[0] == pytest.approx(oracle[0], rel=1e-10)
        # fitted curve increases over grid plus midpoints
        check = sorted(sigmas + [1.75, 3.75])
        curve = analytic_variances(6, 10.0, check, model.gamma0, model.gamma1)
        assert all(b > a for a, b in zip(curve, curve[1:]))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            fitting.fit(6, 10.0, [1.0, 2.0], [0.1, 0.2])
        with pytest.raises(ValueError):
            fitting.fit(6, 10.0, [2.0, 1.0, 3.0], [0.1, 0.2, 0.3])
        with pytest.raises(ValueError):
            fitting.fit(6, 10.0, [1.0, 2.0, 3.0], [0.1, 0.2])
        with pytest.raises(ValueError):
            fitting.fit(6, 10.0, [1.0, 2.0, 3.0], [0.1, -0.2, 0.3])

    def test_fit_error_carries_best_candidate(self):
        try:
            raise FitError("no monotone fit", best_candidate="model")
        except FitError as err:
            assert err.best_candidate == "model"
