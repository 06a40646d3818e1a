"""Sweeps, slopes, crossover detection and power-law fits."""

import math

import numpy as np
import pytest

from ising_fidelity import (
    Axis,
    ChainSpec,
    DataQualityError,
    DegenerateDataError,
    DomainError,
    GMode,
    RangeError,
    RegimeError,
    SweepTable,
    collapse_residuals,
    find_crossover,
    fit_power_law,
    local_slope,
    log_fidelity,
    resolve_field,
    slope_crossing,
    sweep,
)


def synthetic_table(xs, log_fs, axis=Axis.SIZE):
    return SweepTable(axis=axis, points=tuple(zip(xs, log_fs)))


class TestResolveField:
    def test_modes(self):
        assert resolve_field(GMode.AT_CRITICAL, 1e-3) == 1.0
        assert resolve_field("plus_delta", 1e-3) == 1.0 + 1e-3
        assert resolve_field(GMode.PLUS_5DELTA, 1e-3) == 1.0 + 5e-3

    def test_explicit_number(self):
        assert resolve_field(1.23, 1e-3) == 1.23

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            resolve_field("sideways", 1e-3)


class TestSweep:
    def test_size_sweep_values(self):
        grid = [100, 200, 400]
        table = sweep(Axis.SIZE, {"delta": 1e-3}, grid, GMode.AT_CRITICAL)
        assert table.xs.tolist() == [100.0, 200.0, 400.0]
        for n, log_f in table.points:
            direct = log_fidelity(ChainSpec(int(n), 1.0, 1e-3)).log_f
            assert log_f == direct

    def test_delta_sweep_resolves_field_per_point(self):
        grid = [1e-4, 2e-4, 4e-4]
        table = sweep(Axis.DELTA, {"size": 1000}, grid, GMode.PLUS_DELTA)
        for d, log_f in table.points:
            direct = log_fidelity(ChainSpec(1000, 1.0 + d, d)).log_f
            assert log_f == direct

    def test_field_sweep_ignores_mode(self):
        grid = [0.9, 1.0, 1.1]
        table = sweep(Axis.FIELD, {"size": 100, "delta": 1e-3}, grid)
        assert [x for x, _ in table.points] == grid

    def test_zero_half_diff_gives_flat_table(self):
        table = sweep(Axis.SIZE, {"delta": 0.0}, [10, 20, 30])
        assert all(log_f == 0.0 for _, log_f in table.points)

    def test_meta_records_fixed_parameters(self):
        table = sweep(Axis.SIZE, {"delta": 1e-3}, [10, 20, 30], "plus_delta")
        assert table.meta["delta"] == 1e-3
        assert table.meta["g_mode"] == "plus_delta"
        assert table.meta["axis"] == "size"

    def test_missing_fixed_parameter(self):
        with pytest.raises(DomainError, match="delta"):
            sweep(Axis.SIZE, {}, [10, 20, 30])
        with pytest.raises(DomainError, match="size"):
            sweep(Axis.DELTA, {}, [1e-4, 2e-4, 3e-4])

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            sweep(Axis.SIZE, {"delta": 1e-3}, [10, 20])
        with pytest.raises(DomainError):
            sweep(Axis.SIZE, {"delta": 1e-3}, [10, 30, 20])

    def test_error_annotated_with_grid_point(self):
        with pytest.raises(DomainError, match="grid point size=11"):
            sweep(Axis.SIZE, {"delta": 1e-3}, [10, 11, 14])

    def test_thread_count_does_not_change_bits(self, monkeypatch):
        grid = [1000, 2000, 4000, 8000]
        monkeypatch.setenv("FIDELITY_THREADS", "1")
        serial = sweep(Axis.SIZE, {"delta": 1e-4}, grid).points
        monkeypatch.setenv("FIDELITY_THREADS", "4")
        threaded = sweep(Axis.SIZE, {"delta": 1e-4}, grid).points
        assert serial == threaded

    def test_bad_thread_env(self, monkeypatch):
        monkeypatch.setenv("FIDELITY_THREADS", "many")
        with pytest.raises(DomainError):
            sweep(Axis.SIZE, {"delta": 1e-4}, [10, 20, 30])


class TestLocalSlope:
    def test_quadratic_data(self):
        xs = np.geomspace(10, 1000, 15)
        table = synthetic_table(xs, -2.5 * xs**2)
        slopes = [s for _, s in local_slope(table)]
        assert all(abs(s - 2.0) < 1e-8 for s in slopes)

    def test_linear_data(self):
        xs = np.geomspace(10, 1000, 15)
        table = synthetic_table(xs, -0.3 * xs)
        slopes = [s for _, s in local_slope(table)]
        assert all(abs(s - 1.0) < 1e-8 for s in slopes)

    def test_returns_x_with_slope(self):
        xs = np.geomspace(1, 100, 5)
        pairs = local_slope(synthetic_table(xs, -xs))
        assert [x for x, _ in pairs] == xs.tolist()

    def test_zero_log_f_degenerate(self):
        table = synthetic_table([1.0, 2.0, 3.0], [-1.0, 0.0, -2.0])
        with pytest.raises(DegenerateDataError):
            local_slope(table)

    def test_chain_slope_bounds_at_criticality(self):
        grid = [int(n) for n in
                np.unique(2 * np.round(np.geomspace(1e2, 1e7, 21) / 2).astype(int))]
        table = sweep(Axis.SIZE, {"delta": 1e-4}, grid, GMode.AT_CRITICAL)
        slopes = [s for _, s in local_slope(table)]
        assert all(0.9 <= s <= 2.1 for s in slopes)


class TestSlopeCrossing:
    def test_constructed_knee(self):
        # -log F = x^2 below the knee, K x above it; crossing within one
        # grid spacing of the knee
        knee = 100.0
        xs = np.geomspace(1.0, 1e4, 41)
        ys = np.where(xs < knee, xs**2, knee * xs)
        table = synthetic_table(xs, -ys)
        crossing = slope_crossing(local_slope(table), 1.5)
        spacing = xs[1] / xs[0]
        assert knee / spacing <= crossing <= knee * spacing

    def test_no_crossing_is_range_error(self):
        xs = np.geomspace(1, 100, 10)
        table = synthetic_table(xs, -(xs**2))
        with pytest.raises(RangeError):
            slope_crossing(local_slope(table), 1.5)

    def test_wobbly_slope_is_data_quality_error(self):
        pairs = [(1.0, 2.0), (2.0, 1.8), (4.0, 1.9), (8.0, 1.2), (16.0, 1.0)]
        with pytest.raises(DataQualityError):
            slope_crossing(pairs, 1.5)


class TestFindCrossover:
    def test_scaling_of_crossover_size(self):
        for delta in (1e-3, 3e-5):
            n32 = find_crossover(delta, GMode.AT_CRITICAL)
            assert 0.1 <= n32 * delta <= 10.0

    def test_mode_prefactor_ratio(self):
        at_critical = find_crossover(1e-4, GMode.AT_CRITICAL)
        plus5 = find_crossover(1e-4, GMode.PLUS_5DELTA)
        ratio = at_critical / plus5
        assert 3.6 / 0.3 / 3.0 <= ratio <= 3.6 / 0.3 * 3.0

    def test_half_diff_domain(self):
        with pytest.raises(DomainError):
            find_crossover(0.1)
        with pytest.raises(DomainError):
            find_crossover(1e-7)

    def test_target_slope_domain(self):
        with pytest.raises(DomainError):
            find_crossover(1e-3, target_slope=2.5)


class TestFitPowerLaw:
    def test_exact_inverse_law(self):
        xs = np.geomspace(1, 100, 8)
        fit = fit_power_law(list(zip(xs, 2.0 / xs)))
        assert fit.prefactor_a == pytest.approx(2.0, rel=1e-12)
        assert fit.exponent_b == pytest.approx(1.0, abs=1e-12)
        assert fit.stderr_b < 1e-12
        assert max(abs(r) for r in fit.residuals) < 1e-12

    def test_roundtrip_synthetic_parameters(self):
        a, b = 0.37, 1.7
        xs = np.geomspace(0.01, 10, 12)
        fit = fit_power_law(list(zip(xs, a * xs ** (-b))))
        assert fit.prefactor_a == pytest.approx(a, rel=1e-10)
        assert fit.exponent_b == pytest.approx(b, rel=1e-10)

    def test_residual_count(self):
        xs = [1.0, 2.0, 4.0, 8.0]
        fit = fit_power_law(list(zip(xs, [3.0, 1.4, 0.8, 0.4])))
        assert len(fit.residuals) == 4
        assert math.isfinite(fit.stderr_b)

    def test_arity(self):
        with pytest.raises(DomainError):
            fit_power_law([(1.0, 1.0), (2.0, 0.5)])

    def test_positivity(self):
        with pytest.raises(DomainError):
            fit_power_law([(1.0, 1.0), (2.0, -0.5), (3.0, 0.2)])

    def test_zero_variance(self):
        with pytest.raises(DegenerateDataError):
            fit_power_law([(2.0, 1.0), (2.0, 0.5), (2.0, 0.2)])


class TestCollapse:
    def test_residual_shrinks_with_system_size(self):
        cs = np.linspace(-2.0, 2.0, 9)
        coarse = collapse_residuals([1e-3], cs, 40_000)   # N|delta| = 40
        fine = collapse_residuals([1e-3], cs, 400_000)    # N|delta| = 400
        assert fine < coarse
        assert coarse < 0.02
        assert fine < 2e-3

    def test_per_site_curves_collapse_across_half_diffs(self):
        # leading order is half-diff independent
        size = 4_000_000
        cs = np.linspace(-2.0, 2.0, 9)
        curves = []
        for delta in (5e-4, 1e-3):
            curve = [
                -log_fidelity(ChainSpec(size, 1.0 + c * delta, delta)).log_f
                / (size * delta)
                for c in cs
            ]
            curves.append(curve)
        worst = max(abs(a - b) for a, b in zip(*curves))
        assert worst < 2e-3

    def test_small_system_modes_collapse(self):
        size, delta = 1000, 1e-7
        reference = delta * delta * size * size / 16.0
        values = [
            log_fidelity(ChainSpec(size, resolve_field(mode, delta), delta)).log_f
            for mode in (GMode.AT_CRITICAL, GMode.PLUS_DELTA, GMode.PLUS_5DELTA)
        ]
        for i, a in enumerate(values):
            for b in values[i + 1:]:
                assert abs(a - b) / reference < 0.01

    def test_regime_guards(self):
        with pytest.raises(RegimeError):
            collapse_residuals([0.0], [0.0], 1000)
        with pytest.raises(RegimeError):
            collapse_residuals([1e-4], [0.0], 1000)  # N|delta| < 10
        with pytest.raises(RegimeError):
            collapse_residuals([1e-3], [100.0], 100_000)  # |c delta| > 0.05
