"""Metric formulas against hand-computed and closed-form oracles."""
import math

import numpy as np
import pytest

from splitfuzz.metrics import (
    MetricsError,
    MetricsReport,
    dynamic_metrics,
    error_metrics,
    evaluate,
    integral_metrics,
)


class TestErrorMetrics:
    def test_constant_error(self):
        series = [4.9] * 50  # error 0.1 throughout
        mse, rmse, mae = error_metrics(series, setpoint=5.0)
        assert mse == pytest.approx(0.01)
        assert rmse == pytest.approx(0.1)
        assert mae == pytest.approx(0.1)

    def test_alternating_error(self):
        series = [4.0, 6.0] * 25
        mse, rmse, mae = error_metrics(series, setpoint=5.0)
        assert (mse, rmse, mae) == pytest.approx((1.0, 1.0, 1.0))

    def test_hand_arithmetic(self):
        # errors {0, 1, 2}: mse 5/3, rmse sqrt(5/3), mae 1.
        series = [5.0, 4.0, 3.0]
        mse, rmse, mae = error_metrics(series, setpoint=5.0)
        assert mse == pytest.approx(5.0 / 3.0)
        assert rmse == pytest.approx(math.sqrt(5.0 / 3.0))
        assert mae == pytest.approx(1.0)

    def test_rmse_is_sqrt_mse(self):
        rng = np.random.default_rng(1)
        series = rng.uniform(0.0, 10.0, 200)
        mse, rmse, _ = error_metrics(series, setpoint=5.0)
        assert rmse == pytest.approx(math.sqrt(mse), abs=0.0)

    def test_empty_series(self):
        with pytest.raises(MetricsError):
            error_metrics([], 5.0)


class TestIntegralMetrics:
    def test_unit_error_ten_seconds(self):
        series = [4.0] * 10  # e = 1, dt = 1, t in {0..9}
        iae, ise, itae = integral_metrics(series, setpoint=5.0, dt=1.0)
        assert iae == pytest.approx(10.0)
        assert ise == pytest.approx(10.0)
        assert itae == pytest.approx(45.0)

    def test_zero_error(self):
        assert integral_metrics([5.0] * 100, 5.0, 0.1) == pytest.approx((0.0, 0.0, 0.0))

    def test_exponential_decay_closed_form(self):
        # e(t) = exp(-t): integral over [0, 10] is 1 - e^-10.
        dt = 0.001
        t = np.arange(0.0, 10.0, dt)
        series = 5.0 - np.exp(-t)
        iae, ise, itae = integral_metrics(series, setpoint=5.0, dt=dt)
        assert iae == pytest.approx(1.0 - math.exp(-10.0), abs=1e-3)
        # Bonus closed forms at the same tolerance.
        assert ise == pytest.approx(0.5 * (1.0 - math.exp(-20.0)), abs=1e-3)
        assert itae == pytest.approx(1.0 - 11.0 * math.exp(-10.0), abs=1e-3)


class TestDynamicMetrics:
    def test_linear_ramp_rise_time(self):
        # Ramp 0 -> 1 over 10 s: 10% at t=1, 90% at t=9, rise 8 s.
        dt = 0.01
        t = np.arange(0.0, 10.0 + dt, dt)
        series = np.minimum(t / 10.0, 1.0)
        _, rise, fall, _, _ = dynamic_metrics(series, setpoint=1.0, dt=dt)
        assert fall is None
        assert rise == pytest.approx(8.0, abs=2 * dt)

    def test_overshoot_formula(self):
        series = np.concatenate([np.linspace(0.0, 5.5, 50), np.full(50, 5.0)])
        *_, over_under = dynamic_metrics(series, setpoint=5.0, dt=0.1)
        assert over_under == pytest.approx(10.0, abs=0.5)

    def test_oscillation_never_settles_at_two_percent(self):
        t = np.arange(0.0, 25.0, 0.1)
        series = 5.0 + 0.15 * np.sign(np.sin(2.0 * np.pi * t / 3.0))
        sse, _, _, settle, _ = dynamic_metrics(series, setpoint=5.0, dt=0.1, band_pct=2.0)
        assert settle is None
        assert sse == pytest.approx(0.15, abs=0.01)

    def test_five_percent_band_can_settle(self):
        t = np.arange(0.0, 25.0, 0.1)
        series = 5.0 + 0.15 * np.sign(np.sin(2.0 * np.pi * t / 3.0))
        _, _, _, settle, _ = dynamic_metrics(series, setpoint=5.0, dt=0.1, band_pct=5.0)
        # 0.15 < 0.25 band: inside from the start.
        assert settle == 0.0

    def test_fall_time_direction(self):
        dt = 0.01
        t = np.arange(0.0, 10.0 + dt, dt)
        series = np.maximum(9.0 - 0.4 * t, 5.0)
        sse, rise, fall, settle, _ = dynamic_metrics(series, setpoint=5.0, dt=dt)
        assert rise is None
        assert fall == pytest.approx(8.0, abs=2 * dt)

    def test_zero_setpoint_rejected(self):
        with pytest.raises(MetricsError):
            dynamic_metrics([0.1, 0.2], setpoint=0.0, dt=0.1)

    def test_invalid_band(self):
        with pytest.raises(MetricsError):
            dynamic_metrics([5.0], setpoint=5.0, dt=0.1, band_pct=3.0)

    def test_sse_uses_final_ten_percent(self):
        series = np.concatenate([np.full(90, 9.0), np.full(10, 5.2)])
        sse, *_ = dynamic_metrics(series, setpoint=5.0, dt=0.1)
        assert sse == pytest.approx(0.2)


class TestInvariants:
    def test_cauchy_schwarz(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            n = int(rng.integers(10, 500))
            dt = float(rng.uniform(0.01, 1.0))
            series = rng.uniform(0.0, 10.0, n)
            iae, ise, _ = integral_metrics(series, 5.0, dt)
            assert iae <= math.sqrt(ise * n * dt) + 1e-9

    def test_scaling_laws(self):
        rng = np.random.default_rng(4)
        series = 5.0 + rng.normal(0.0, 1.0, 300)
        lam = 3.0
        scaled = 5.0 + lam * (series - 5.0)
        m1 = evaluate(series, 5.0, 0.1)
        m2 = evaluate(scaled, 5.0, 0.1)
        assert m2.mae == pytest.approx(lam * m1.mae)
        assert m2.rmse == pytest.approx(lam * m1.rmse)
        assert m2.iae == pytest.approx(lam * m1.iae)
        assert m2.itae == pytest.approx(lam * m1.itae)
        assert m2.mse == pytest.approx(lam ** 2 * m1.mse)
        assert m2.ise == pytest.approx(lam ** 2 * m1.ise)

    def test_band_times_invariant_to_joint_rescale(self):
        rng = np.random.default_rng(8)
        base = np.concatenate([np.linspace(2.0, 5.0, 100), np.full(150, 5.0)])
        base += rng.normal(0.0, 0.002, len(base))
        m1 = evaluate(base, 5.0, 0.1)
        m2 = evaluate(2.0 * base, 10.0, 0.1)
        assert m2.settling_time == m1.settling_time
        assert m2.rise_time == m1.rise_time

    def test_settling_at_least_rise_when_both_present(self):
        # Exponential approach: response shapes where both are defined.
        for tau in (0.5, 1.0, 3.0):
            t = np.arange(0.0, 25.0, 0.1)
            series = 5.0 - 2.0 * np.exp(-t / tau)
            m = evaluate(series, 5.0, 0.1)
            assert m.settling_time is not None and m.rise_time is not None
            assert m.settling_time >= m.rise_time

    def test_csv_row_renders_absent_as_empty(self):
        report = evaluate(5.0 + 0.15 * np.sign(np.sin(np.arange(250) / 3.0)), 5.0, 0.1)
        row = report.csv_row(0.0)
        fields = row.split(",")
        assert len(fields) == 12
        assert fields[MetricsReport.CSV_HEADER.split(",").index("settle_s")] == ""
