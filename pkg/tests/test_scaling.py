"""Scaling function, its derivative and the regime predictions."""

import math

import numpy as np
import pytest

from ising_fidelity import (
    ChainSpec,
    DomainError,
    Formula,
    PINCH_VALUE,
    Regime,
    RegimeError,
    fidelity_susceptibility,
    log_fidelity,
    log_fidelity_per_site_integral,
    predict_log_fidelity,
    scaling_a,
    scaling_a_asymptotic,
    scaling_a_derivative,
    scaling_parameter,
)


class TestScalingFunction:
    def test_symmetric_point(self):
        result = scaling_a(0.0)
        assert result.a_value == 0.25
        assert result.regime is Regime.INNER
        assert abs(result.da_dc) < 1e-6

    def test_pinch_value_and_flags(self):
        for c, slope_sign in ((1.0, -1), (-1.0, 1)):
            result = scaling_a(c)
            assert result.a_value == pytest.approx(PINCH_VALUE, rel=1e-15)
            assert result.regime is Regime.PINCH
            assert math.isinf(result.da_dc)
            assert math.copysign(1, result.da_dc) == slope_sign

    def test_pinch_tolerance_window(self):
        assert scaling_a(1.0 + 1e-10).regime is Regime.PINCH
        assert scaling_a(1.0 + 1e-8).regime is Regime.OUTER
        assert scaling_a(1.0 - 1e-8).regime is Regime.INNER

    def test_far_tail_named_value(self):
        value = scaling_a(10.0).a_value
        assert abs(value - 1.0 / 160.0) / (1.0 / 160.0) < 0.03

    def test_even_bitwise(self):
        for c in (0.3, 0.77, 1.0, 1.4, 2.5, 17.0):
            assert scaling_a(c).a_value == scaling_a(-c).a_value

    def test_continuity_at_pinch(self):
        inner = scaling_a(1.0 - 1e-6).a_value
        outer = scaling_a(1.0 + 1e-6).a_value
        assert abs(inner - outer) < 1e-4
        assert inner == pytest.approx(PINCH_VALUE, abs=1e-4)

    def test_positive_on_wide_grid(self):
        for c in np.linspace(-100.0, 100.0, 10_000):
            assert scaling_a(float(c)).a_value >= 0.0

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            scaling_a(math.nan)


class TestAsymptotic:
    def test_named_values(self):
        assert scaling_a_asymptotic(16.0) == 1.0 / 256.0
        assert scaling_a_asymptotic(-16.0) == 1.0 / 256.0

    def test_relative_deviation_beyond_eight(self):
        for c in np.geomspace(8.0, 300.0, 25):
            value = scaling_a(float(c)).a_value
            assert abs(value - scaling_a_asymptotic(float(c))) / value < 0.05

    @pytest.mark.parametrize("c", [0.5, 1.0, -0.2])
    def test_inner_rejected(self, c):
        with pytest.raises(DomainError):
            scaling_a_asymptotic(c)


class TestDerivative:
    def test_symmetric_point_is_flat(self):
        assert abs(scaling_a_derivative(0.0, 1e-5)) < 1e-6

    def test_near_pinch_expansion_below(self):
        # ln(1e-3)/4pi - 3 ln2/4pi, no jump term on the inner side
        expected = math.log(1e-3) / (4 * math.pi) - 3 * math.log(2) / (4 * math.pi)
        value = scaling_a_derivative(1.0 - 1e-3, 1e-5)
        assert value == pytest.approx(expected, rel=0.02)

    def test_near_pinch_expansion_above(self):
        expected = (
            math.log(1e-3) / (4 * math.pi)
            - 3 * math.log(2) / (4 * math.pi)
            + 0.25
        )
        value = scaling_a_derivative(1.0 + 1e-3, 1e-5)
        assert value == pytest.approx(expected, rel=0.02)

    def test_odd_in_c(self):
        assert scaling_a_derivative(-2.0, 1e-6) == pytest.approx(
            -scaling_a_derivative(2.0, 1e-6), rel=1e-6
        )

    def test_step_preconditions(self):
        with pytest.raises(DomainError):
            scaling_a_derivative(0.5, 0.1)  # h > 1e-4
        with pytest.raises(DomainError):
            scaling_a_derivative(1.001, 1e-3)  # h > |1-|c||/10
        with pytest.raises(DomainError):
            scaling_a_derivative(1.0, 1e-12)  # at the pinch


class TestPredictions:
    def test_scaling_law_symmetric_point(self):
        p = predict_log_fidelity(1.0, 1e-4, 200_000, Formula.SCALING_LAW)
        assert p.log_f_predicted == pytest.approx(-5.0, rel=1e-12)
        assert p.formula is Formula.SCALING_LAW

    def test_away_example(self):
        p = predict_log_fidelity(1.1, 1e-5, 1_000_000, Formula.AWAY)
        assert p.log_f_predicted == pytest.approx(-6.25e-5, rel=1e-12)

    def test_zero_half_diff_short_circuits(self):
        for formula in Formula:
            assert predict_log_fidelity(1.4, 0.0, 100, formula).log_f_predicted == 0.0

    def test_susceptibility_formula(self):
        n, d = 400, 1e-4
        p = predict_log_fidelity(1.0, d, n, Formula.SUSCEPTIBILITY)
        expected = -d * d * fidelity_susceptibility(1.0, n) / 2.0
        assert p.log_f_predicted == expected

    def test_predictions_nonpositive(self):
        cases = [
            (1.003, 1e-3, 10_000, Formula.SCALING_LAW),
            (1.04, 1e-4, 10_000, Formula.AWAY),
            (0.9, 1e-5, 1_000, Formula.SUSCEPTIBILITY),
        ]
        for g, d, n, formula in cases:
            assert predict_log_fidelity(g, d, n, formula).log_f_predicted <= 0.0

    def test_regime_guards_name_the_inequality(self):
        with pytest.raises(RegimeError, match="delta"):
            predict_log_fidelity(1.0, 0.1, 100, Formula.SCALING_LAW)
        with pytest.raises(RegimeError, match="g - 1"):
            predict_log_fidelity(1.2, 1e-3, 100, Formula.SCALING_LAW)
        with pytest.raises(RegimeError, match="g - 1"):
            predict_log_fidelity(1.0001, 1e-3, 100, Formula.AWAY)
        with pytest.raises(RegimeError, match="N"):
            predict_log_fidelity(1.0, 1e-2, 1_000, Formula.SUSCEPTIBILITY)

    def test_away_and_scaling_law_agree_in_overlap(self):
        # tail regime where both closed forms are valid (c > 10 keeps the
        # away guard satisfied after rounding of 1 + c delta)
        delta = 1e-4
        for c in (12.0, 20.0, 100.0, 400.0):
            g = 1.0 + c * delta
            away = predict_log_fidelity(g, delta, 100_000, Formula.AWAY)
            law = predict_log_fidelity(g, delta, 100_000, Formula.SCALING_LAW)
            rel = abs(away.log_f_predicted - law.log_f_predicted) / abs(
                law.log_f_predicted
            )
            assert rel < 0.05


class TestScalingParameter:
    def test_symmetric_point(self):
        assert scaling_parameter(1.0, 1e-3) == pytest.approx(2.5e-4, rel=1e-12)

    def test_pinch_configuration(self):
        assert scaling_parameter(1.0 + 1e-3, 1e-3) == pytest.approx(
            1e-3 * PINCH_VALUE, rel=1e-9
        )

    def test_far_tail(self):
        value = scaling_parameter(1.016, 1e-3)
        assert abs(value - 1e-3 / 256.0) / (1e-3 / 256.0) < 0.05

    def test_zero_half_diff(self):
        assert scaling_parameter(1.01, 0.0) == 0.0

    def test_matches_per_site_integral(self):
        # subleading corrections are O(delta) with coefficient ~1.7 near
        # the pinch, so the 1% agreement holds for |delta| <~ 5e-3
        for g, delta in [(1.0, 1e-3), (1.002, 1e-3), (0.995, 5e-3),
                         (1.005, 5e-3), (1.0, 1e-2)]:
            analytic = scaling_parameter(g, delta)
            integral = -log_fidelity_per_site_integral(g, delta)
            assert abs(analytic - integral) / integral < 1e-2

    def test_regime_guards(self):
        with pytest.raises(RegimeError):
            scaling_parameter(1.0, 0.2)
        with pytest.raises(RegimeError):
            scaling_parameter(1.2, 1e-3)


class TestScalingOracleAtPinnedParameters:
    def test_mode_product_match(self):
        # at N|delta| = 20 the inner region still carries a finite-size
        # defect of ~0.35/(N|delta|) ~ 1.7e-2 (see notes on criterion 4)
        size, delta = 200_000, 1e-4
        worst = 0.0
        for c in (0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0, -1.0,
                  1.5, -1.5, 2.0, -2.0, 3.0, -3.0, 5.0, -5.0):
            measured = -log_fidelity(
                ChainSpec(size, 1.0 + c * delta, delta)
            ).log_f / (size * delta)
            worst = max(worst, abs(measured - scaling_a(c).a_value))
        assert worst < 1e-3, f"worst |A(c) - numeric| = {worst:.3e}"

    def test_mode_product_match_deep_thermodynamic(self):
        # same comparison with N|delta| = 2000: the defect shrinks ~100x
        # and the analytic curve is confirmed on both sides of the pinch
        size, delta = 4_000_000, 5e-4
        worst = 0.0
        for c in (0.0, 0.5, -0.5, 1.0, 1.5, -1.5, 3.0, 5.0):
            measured = -log_fidelity(
                ChainSpec(size, 1.0 + c * delta, delta)
            ).log_f / (size * delta)
            worst = max(worst, abs(measured - scaling_a(c).a_value))
        assert worst < 1e-3, f"worst |A(c) - numeric| = {worst:.3e}"
