"""Separator pressure plant: mass-balance pressure dynamics, valve actuator
dynamics from the identified third-order transfer function with pure input
delay, measurement noise, and the closed-loop runner.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .controller import ControllerConfig, RuleBase, SplitRangeController, default_rules

# Identified valve transfer function (continuous time):
#   (0.4455 s^2 - 1.14e-5 s + 0.003544) / (s^3 + 0.447 s^2 + 0.007935 s + 0.003547)
VALVE_NUM = (0.4455, -1.14e-5, 0.003544)
VALVE_DEN = (1.0, 0.447, 0.007935, 0.003547)
VALVE_DC_GAIN = VALVE_NUM[-1] / VALVE_DEN[-1]  # ~0.99915

# Flow-balance defaults. base_outflow is chosen so that the centroid
# controller's zero-error working point (fuel 14%, outlet ~27.967%) balances
# exactly: base_outflow = 14 / 27.966667 (see notes on the default term set).
DEFAULT_FUEL_GAIN = 2.75
DEFAULT_OUTLET_GAIN = 2.75
DEFAULT_FUEL_FLOW = 1.0
DEFAULT_BASE_OUTFLOW = 0.500596


class PlantError(ValueError):
    """Invalid plant configuration or construction."""


@dataclass(frozen=True)
class PlantConfig:
    fuel_gain: float = DEFAULT_FUEL_GAIN        # bar/s at full flow
    outlet_gain: float = DEFAULT_OUTLET_GAIN    # bar/s at full flow
    fuel_flow: float = DEFAULT_FUEL_FLOW        # dimensionless inflow factor
    base_outflow: float = DEFAULT_BASE_OUTFLOW  # dimensionless outflow factor
    noise_std: float = 0.005                    # bar, measurement noise
    dt: float = 0.1                             # s
    duration: float = 25.0                      # s
    initial_pressure: float = 9.53              # bar
    actuator_dynamics: bool = False             # identified valve model + delay
    delay: float = 0.5                          # s, pure input delay

    def __post_init__(self):
        if self.dt <= 0.0:
            raise PlantError(f"dt must be positive, got {self.dt}")
        if self.duration < self.dt:
            raise PlantError("duration must be at least one step")
        if self.noise_std < 0.0:
            raise PlantError("noise_std must be non-negative")
        if self.fuel_gain < 0.0 or self.outlet_gain < 0.0:
            raise PlantError("gains must be non-negative")
        if not 0.0 <= self.initial_pressure <= 10.0:
            raise PlantError(f"initial pressure must lie in [0, 10] bar, got {self.initial_pressure}")
        if self.delay < 0.0:
            raise PlantError("delay must be non-negative")


@dataclass
class PlantState:
    t: float = 0.0
    pressure_true: float = 0.0
    pressure_measured: float = 0.0
    fuel_effective_pct: float = 0.0
    outlet_effective_pct: float = 0.0


class DiscreteValveModel:
    """Bilinear discretization of the identified valve transfer function.

    The continuous model is realized in controllable canonical state-space
    form and mapped to discrete time with the trapezoidal (Tustin) rule, which
    preserves the DC gain and the stability of the continuous poles at any
    step size. The 0.5 s transport delay is a separate input shift buffer of
    round(delay/dt) slots, zero-filled at start-up.
    """

    def __init__(self, dt: float, delay: float = 0.5,
                 num: tuple = VALVE_NUM, den: tuple = VALVE_DEN):
        if dt <= 0.0:
            raise PlantError("dt must be positive")
        if den[0] == 0.0:
            raise PlantError("denominator leading coefficient must be nonzero")
        a, b, c, d = signal.tf2ss(num, den)
        ad, bd, cd, dd, _ = signal.cont2discrete((a, b, c, d), dt, method="bilinear")
        # The identified model's printed coefficients place its complex pole
        # pair at +1.3e-7 +/- 0.089j: marginal to rounding. Accept that, reject
        # genuinely unstable systems.
        if np.any(np.abs(np.linalg.eigvals(ad)) >= 1.0 + 1e-6):
            raise PlantError("discretization produced an unstable system")
        self.dt = dt
        self.delay = delay
        self._a, self._b = ad, bd
        self._c, self._d = cd, dd
        self._x = np.zeros((ad.shape[0], 1))
        self.delay_steps = int(round(delay / dt))
        self._buffer = deque([0.0] * self.delay_steps)

    @property
    def state(self) -> np.ndarray:
        return self._x.ravel().copy()

    def step(self, commanded_pct: float) -> float:
        """Push one command through the delay line and the discrete update."""
        if self.delay_steps > 0:
            self._buffer.append(float(commanded_pct))
            u = self._buffer.popleft()
        else:
            u = float(commanded_pct)
        y = float((self._c @ self._x + self._d * u).item())
        self._x = self._a @ self._x + self._b * u
        return min(max(y, 0.0), 100.0)

    def step_linear(self, commanded_pct: float) -> float:
        """Delay + state update without the output clamp (linearity checks)."""
        if self.delay_steps > 0:
            self._buffer.append(float(commanded_pct))
            u = self._buffer.popleft()
        else:
            u = float(commanded_pct)
        y = float((self._c @ self._x + self._d * u).item())
        self._x = self._a @ self._x + self._b * u
        return y


def pressure_step(cfg: PlantConfig, state: PlantState, fuel_pct: float,
                  outlet_pct: float, noise_sample: float) -> PlantState:
    """Forward-Euler mass balance; measurement noise never feeds the true state."""
    inflow = cfg.fuel_gain * cfg.fuel_flow * (fuel_pct / 100.0)
    outflow = cfg.outlet_gain * cfg.base_outflow * (outlet_pct / 100.0)
    p = max(0.0, state.pressure_true + cfg.dt * (inflow - outflow))
    return PlantState(
        t=state.t + cfg.dt,
        pressure_true=p,
        pressure_measured=p + noise_sample,
        fuel_effective_pct=fuel_pct,
        outlet_effective_pct=outlet_pct,
    )


SERIES_HEADER = "t_s,setpoint_bar,pressure_bar,fuel_cmd_pct,outlet_cmd_pct,fuel_eff_pct,outlet_eff_pct"


@dataclass(frozen=True)
class SimulationResult:
    """Closed-loop time series; pressure is the measured (noisy) signal."""

    t: np.ndarray
    setpoint: np.ndarray
    pressure: np.ndarray
    fuel_cmd: np.ndarray
    outlet_cmd: np.ndarray
    fuel_eff: np.ndarray
    outlet_eff: np.ndarray
    pressure_true: np.ndarray
    fault: np.ndarray
    dt: float

    def rows(self):
        for i in range(len(self.t)):
            yield (self.t[i], self.setpoint[i], self.pressure[i], self.fuel_cmd[i],
                   self.outlet_cmd[i], self.fuel_eff[i], self.outlet_eff[i])

    def to_csv(self) -> str:
        lines = [SERIES_HEADER]
        for row in self.rows():
            lines.append(",".join(f"{v:.6f}" for v in row))
        return "\n".join(lines) + "\n"


def run_closed_loop(cfg: PlantConfig, controller_cfg: ControllerConfig,
                    rules: RuleBase | None = None, seed: int = 0) -> SimulationResult:
    """Simulate the full loop: measure, control, actuate, integrate.

    Deterministic for a given seed. Valves start at 0% with zero-filled delay
    buffers; with actuator dynamics disabled commands act directly.
    """
    rules = rules if rules is not None else default_rules()
    controller = SplitRangeController(controller_cfg, rules)
    rng = np.random.default_rng(seed)
    n = int(round(cfg.duration / cfg.dt)) + 1

    fuel_valve = outlet_valve = None
    if cfg.actuator_dynamics:
        fuel_valve = DiscreteValveModel(cfg.dt, cfg.delay)
        outlet_valve = DiscreteValveModel(cfg.dt, cfg.delay)

    state = PlantState(
        t=0.0,
        pressure_true=cfg.initial_pressure,
        pressure_measured=cfg.initial_pressure
        + (rng.normal(0.0, cfg.noise_std) if cfg.noise_std > 0.0 else 0.0),
    )

    t = np.empty(n)
    pressure = np.empty(n)
    pressure_true = np.empty(n)
    fuel_cmd = np.empty(n)
    outlet_cmd = np.empty(n)
    fuel_eff = np.empty(n)
    outlet_eff = np.empty(n)
    fault = np.zeros(n, dtype=bool)

    for i in range(n):
        cmd = controller.step(state.pressure_measured)
        if cfg.actuator_dynamics:
            eff_fuel = fuel_valve.step(cmd.fuel_pct)
            eff_outlet = outlet_valve.step(cmd.outlet_pct)
        else:
            eff_fuel, eff_outlet = cmd.fuel_pct, cmd.outlet_pct

        t[i] = state.t
        pressure[i] = state.pressure_measured
        pressure_true[i] = state.pressure_true
        fuel_cmd[i] = cmd.fuel_pct
        outlet_cmd[i] = cmd.outlet_pct
        fuel_eff[i] = eff_fuel
        outlet_eff[i] = eff_outlet
        fault[i] = controller.fault

        if i < n - 1:
            noise = rng.normal(0.0, cfg.noise_std) if cfg.noise_std > 0.0 else 0.0
            state = pressure_step(cfg, state, eff_fuel, eff_outlet, noise)

    sp = np.full(n, controller_cfg.setpoint)
    return SimulationResult(t, sp, pressure, fuel_cmd, outlet_cmd,
                            fuel_eff, outlet_eff, pressure_true, fault, cfg.dt)
