"""Plant: valve discretization against analytic oracles, delay exactness,
linearity, the Euler pressure balance, and closed-loop determinism."""
import numpy as np
import pytest

from splitfuzz.controller import ControllerConfig
from splitfuzz.fuzzy import DefuzzMethod
from splitfuzz.plant import (
    DiscreteValveModel,
    PlantConfig,
    PlantError,
    PlantState,
    VALVE_DC_GAIN,
    pressure_step,
    run_closed_loop,
)

# Analytic oracle: the transfer-function ratio at s = 0.
DC_ORACLE = 0.003544 / 0.003547


class TestDiscreteValveModel:
    def test_dc_gain_value(self):
        assert VALVE_DC_GAIN == pytest.approx(DC_ORACLE)
        assert DC_ORACLE == pytest.approx(0.99915, abs=1e-5)

    def test_step_response_converges_to_dc_gain(self):
        valve = DiscreteValveModel(dt=0.1, delay=0.5)
        y = 0.0
        for _ in range(2000):  # 200 s, well past the 2.24 s dominant lag
            y = valve.step_linear(1.0)
        assert y == pytest.approx(DC_ORACLE, abs=1e-3)

    def test_constant_50_converges_to_scaled_dc(self):
        valve = DiscreteValveModel(dt=0.1, delay=0.5)
        y = 0.0
        for _ in range(2000):
            y = valve.step(50.0)
        assert y == pytest.approx(50.0 * DC_ORACLE, abs=0.05)
        assert y == pytest.approx(49.96, abs=0.05)

    def test_zero_input_zero_output(self):
        valve = DiscreteValveModel(dt=0.1, delay=0.5)
        assert all(valve.step_linear(0.0) == 0.0 for _ in range(100))

    @pytest.mark.parametrize("dt", [0.1, 0.05, 0.25])
    def test_delay_buffer_exact_dead_time(self, dt):
        valve = DiscreteValveModel(dt=dt, delay=0.5)
        dead = int(round(0.5 / dt))
        assert valve.delay_steps == dead
        outputs = [valve.step_linear(100.0) for _ in range(dead + 1)]
        assert all(v == 0.0 for v in outputs[:dead])
        assert outputs[dead] != 0.0

    def test_linearity(self):
        rng = np.random.default_rng(2)
        u1 = rng.uniform(0.0, 1.0, 300)
        u2 = rng.uniform(0.0, 1.0, 300)
        alpha, beta = 0.7, -0.4

        def response(u):
            valve = DiscreteValveModel(dt=0.1, delay=0.5)
            return np.array([valve.step_linear(v) for v in u])

        combined = response(alpha * u1 + beta * u2)
        superposed = alpha * response(u1) + beta * response(u2)
        assert np.max(np.abs(combined - superposed)) < 1e-9

    def test_output_clamped(self):
        valve = DiscreteValveModel(dt=0.1, delay=0.0)
        for _ in range(500):
            y = valve.step(100.0)
        assert 0.0 <= y <= 100.0

    def test_unstable_system_rejected(self):
        with pytest.raises(PlantError):
            DiscreteValveModel(dt=0.1, delay=0.0, num=(1.0,), den=(1.0, -0.5))

    def test_invalid_dt(self):
        with pytest.raises(PlantError):
            DiscreteValveModel(dt=0.0)


class TestPressureStep:
    def test_closed_valves_hold_pressure(self):
        cfg = PlantConfig(noise_std=0.0)
        state = PlantState(t=0.0, pressure_true=5.0, pressure_measured=5.0)
        for _ in range(100):
            state = pressure_step(cfg, state, 0.0, 0.0, 0.0)
        assert state.pressure_true == 5.0

    def test_euler_arithmetic(self):
        # fuel_gain*fuel_flow = 0.2 bar/s at full flow -> +2 bar over 10 s.
        cfg = PlantConfig(fuel_gain=0.2, fuel_flow=1.0, outlet_gain=1.0,
                          base_outflow=0.0, noise_std=0.0, dt=0.1)
        state = PlantState(pressure_true=3.0, pressure_measured=3.0)
        for _ in range(100):
            state = pressure_step(cfg, state, 100.0, 0.0, 0.0)
        assert state.pressure_true == pytest.approx(5.0)

    def test_pressure_never_negative(self):
        cfg = PlantConfig(noise_std=0.0, outlet_gain=5.0, base_outflow=1.0)
        state = PlantState(pressure_true=0.5, pressure_measured=0.5)
        for _ in range(100):
            state = pressure_step(cfg, state, 0.0, 100.0, 0.0)
            assert state.pressure_true >= 0.0

    def test_measurement_noise_statistics(self):
        cfg = PlantConfig(noise_std=0.005)
        rng = np.random.default_rng(0)
        state = PlantState(pressure_true=5.0, pressure_measured=5.0)
        residuals = []
        for _ in range(10_000):
            state = pressure_step(cfg, state, 0.0, 0.0, rng.normal(0.0, cfg.noise_std))
            residuals.append(state.pressure_measured - state.pressure_true)
        assert np.std(residuals) == pytest.approx(0.005, rel=0.05)

    def test_affine_in_time_with_frozen_commands(self):
        cfg = PlantConfig(noise_std=0.0, dt=0.1)
        state = PlantState(pressure_true=2.0, pressure_measured=2.0)
        trace = [state.pressure_true]
        for _ in range(50):
            state = pressure_step(cfg, state, 60.0, 10.0, 0.0)
            trace.append(state.pressure_true)
        diffs = np.diff(trace)
        assert np.allclose(diffs, diffs[0])


class TestPlantConfigValidation:
    def test_bad_dt(self):
        with pytest.raises(PlantError):
            PlantConfig(dt=0.0)

    def test_bad_initial_pressure(self):
        with pytest.raises(PlantError):
            PlantConfig(initial_pressure=10.5)

    def test_negative_noise(self):
        with pytest.raises(PlantError):
            PlantConfig(noise_std=-0.1)


class TestClosedLoop:
    def test_zero_error_fixed_point_with_zero_flows(self):
        # Balanced only if flows are zero: the loop must hold 5 bar exactly.
        cfg = PlantConfig(initial_pressure=5.0, noise_std=0.0,
                          fuel_flow=0.0, base_outflow=0.0)
        res = run_closed_loop(cfg, ControllerConfig(setpoint=5.0), seed=1)
        assert np.max(np.abs(res.pressure - 5.0)) <= 0.01

    def test_zero_error_balanced_defaults_hold_setpoint(self):
        # The default flow balance pins the centroid fixed point at 5 bar.
        cfg = PlantConfig(initial_pressure=5.0, noise_std=0.0)
        res = run_closed_loop(cfg, ControllerConfig(setpoint=5.0), seed=1)
        assert np.max(np.abs(res.pressure - 5.0)) <= 0.01

    def test_fig10_scenario_reaches_band(self):
        cfg = PlantConfig(initial_pressure=9.53)
        res = run_closed_loop(cfg, ControllerConfig(defuzz=DefuzzMethod.CENTROID), seed=3)
        tail = res.pressure[-25:]
        assert np.all(np.abs(tail - 5.0) <= 0.1)
        # Monotone-ish decay: no sample rises more than 0.1 above the start.
        assert res.pressure.max() <= 9.53 + 0.1

    def test_seeded_determinism(self):
        cfg = PlantConfig(initial_pressure=7.0)
        ctrl = ControllerConfig(defuzz=DefuzzMethod.BISECTOR)
        a = run_closed_loop(cfg, ctrl, seed=11)
        b = run_closed_loop(cfg, ctrl, seed=11)
        assert np.array_equal(a.pressure, b.pressure)
        assert np.array_equal(a.fuel_eff, b.fuel_eff)

    def test_different_seeds_differ(self):
        cfg = PlantConfig(initial_pressure=7.0)
        ctrl = ControllerConfig()
        a = run_closed_loop(cfg, ctrl, seed=1)
        b = run_closed_loop(cfg, ctrl, seed=2)
        assert not np.array_equal(a.pressure, b.pressure)

    def test_actuator_dynamics_path_runs(self):
        cfg = PlantConfig(initial_pressure=9.0, actuator_dynamics=True, noise_std=0.0)
        res = run_closed_loop(cfg, ControllerConfig(), seed=0)
        # Valves start at 0 and the delay line is empty: no effective motion
        # for the first round(delay/dt) steps.
        dead = int(round(cfg.delay / cfg.dt))
        assert np.all(res.fuel_eff[:dead] == 0.0)
        assert np.all(res.outlet_eff[:dead] == 0.0)
        assert len(res.t) == int(round(cfg.duration / cfg.dt)) + 1

    def test_series_csv_shape(self):
        cfg = PlantConfig(initial_pressure=6.0, duration=1.0)
        res = run_closed_loop(cfg, ControllerConfig(), seed=0)
        lines = res.to_csv().strip().splitlines()
        assert lines[0] == ("t_s,setpoint_bar,pressure_bar,fuel_cmd_pct,"
                            "outlet_cmd_pct,fuel_eff_pct,outlet_eff_pct")
        assert len(lines) == 1 + len(res.t)
        assert all(len(line.split(",")) == 7 for line in lines[1:])
