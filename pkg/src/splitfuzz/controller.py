"""Split-range fuzzy pressure controller.

Converts a measured separator pressure into an error against the setpoint,
runs one Mamdani inference per output variable, and emits two valve commands:
the fuel inlet valve (raises pressure) and the gas outlet valve (lowers it).
"""
from __future__ import annotations

from dataclasses import dataclass

from .fuzzy import (
    DefuzzMethod,
    FuzzyError,
    LinguisticVariable,
    MembershipFunction,
    NoRuleFiredError,
    Rule,
    RuleBase,
    Universe,
    defuzzify,
    infer,
)

ERROR_VAR = "pressure_error"
FUEL_VAR = "fuel_valve"
OUTLET_VAR = "outlet_valve"

ERROR_SPAN = 5.0          # bar, symmetric clamp applied before fuzzification
KPA_PER_BAR_SCALE = 0.01  # multiplying kPa by this yields bar

_tri = MembershipFunction.triangle
_trap = MembershipFunction.trapezoid


def default_error_variable(resolution: int = 1001) -> LinguisticVariable:
    """Pressure-error terms: five uniformly spaced shapes on [-5, 5] bar.

    Interior terms are triangles with 50% overlap; the edge terms saturate at
    the universe bounds. "small" doubles as the rule table's "almost absent".
    """
    u = Universe(-ERROR_SPAN, ERROR_SPAN, resolution)
    return LinguisticVariable(
        ERROR_VAR,
        u,
        (
            ("very_negative", _trap(-5.0, -5.0, -5.0, -2.5)),
            ("negative", _tri(-5.0, -2.5, 0.0)),
            ("small", _tri(-2.5, 0.0, 2.5)),
            ("positive", _tri(0.0, 2.5, 5.0)),
            ("very_positive", _trap(2.5, 5.0, 5.0, 5.0)),
        ),
    )


def default_valve_variable(name: str, resolution: int = 1001) -> LinguisticVariable:
    """Valve-position terms on [0, 100] %.

    Plateau-heavy shapes: flat-topped terms keep every defuzzification method
    monotone along the split range and give the closed-loop a stiff response
    on both sides of zero error (see the project notes on term shaping).
    """
    u = Universe(0.0, 100.0, resolution)
    return LinguisticVariable(
        name,
        u,
        (
            ("fully_closed", _trap(0.0, 0.0, 28.0, 28.0)),
            ("mostly_closed", _trap(24.0, 24.0, 24.0, 36.0)),
            ("half_open", _tri(25.0, 50.0, 75.0)),
            ("mostly_open", _trap(25.0, 25.0, 100.0, 100.0)),
            ("fully_open", _trap(86.0, 86.0, 100.0, 100.0)),
        ),
    )


def default_rules(resolution: int = 1001) -> RuleBase:
    """The five expert split-range rules binding pressure error to both valves."""
    error = default_error_variable(resolution)
    fuel = default_valve_variable(FUEL_VAR, resolution)
    outlet = default_valve_variable(OUTLET_VAR, resolution)

    def rule(err_label: str, fuel_label: str, outlet_label: str) -> Rule:
        return Rule(
            antecedent=(ERROR_VAR, err_label),
            consequents=((FUEL_VAR, fuel_label), (OUTLET_VAR, outlet_label)),
        )

    return RuleBase(
        input_var=error,
        output_vars=(fuel, outlet),
        rules=(
            rule("very_positive", "fully_open", "fully_closed"),
            rule("positive", "mostly_open", "fully_closed"),
            rule("small", "fully_closed", "mostly_closed"),
            rule("negative", "fully_closed", "mostly_open"),
            rule("very_negative", "fully_closed", "fully_open"),
        ),
    )


@dataclass(frozen=True)
class ControllerConfig:
    setpoint: float = 5.0
    defuzz: DefuzzMethod = DefuzzMethod.CENTROID
    pressure_unit_scale: float = KPA_PER_BAR_SCALE

    def __post_init__(self):
        if not 0.0 <= self.setpoint <= 10.0:
            raise FuzzyError(f"setpoint must lie in [0, 10] bar, got {self.setpoint}")
        if self.pressure_unit_scale <= 0.0:
            raise FuzzyError("pressure_unit_scale must be positive")
        if not isinstance(self.defuzz, DefuzzMethod):
            object.__setattr__(self, "defuzz", DefuzzMethod.parse(self.defuzz))


@dataclass(frozen=True)
class ValveCommand:
    fuel_pct: float
    outlet_pct: float

    def __post_init__(self):
        for v in (self.fuel_pct, self.outlet_pct):
            if not 0.0 <= v <= 100.0:
                raise FuzzyError(f"valve command {v} outside [0, 100] %")


def compute_error(setpoint: float, measured: float) -> float:
    """Control error in bar: setpoint minus measurement, clamped to [-5, 5]."""
    e = setpoint - measured
    return min(max(e, -ERROR_SPAN), ERROR_SPAN)


def convert_units(raw_kpa: float) -> float:
    """kPa to bar (multiply by 0.01); negative pressures are rejected."""
    if raw_kpa < 0.0:
        raise FuzzyError(f"negative pressure reading: {raw_kpa} kPa")
    return raw_kpa * KPA_PER_BAR_SCALE


class SplitRangeController:
    """Stateless fuzzy mapping except for the fault-fallback last command."""

    def __init__(self, config: ControllerConfig, rules: RuleBase | None = None):
        self.config = config
        self.rules = rules if rules is not None else default_rules()
        self._fuel_var = self.rules.output_var(FUEL_VAR)
        self._outlet_var = self.rules.output_var(OUTLET_VAR)
        self._last = ValveCommand(0.0, 0.0)
        self.fault = False

    def step(self, measured_pressure: float) -> ValveCommand:
        """One control update from a measured pressure in bar."""
        error = compute_error(self.config.setpoint, measured_pressure)
        try:
            fuel = defuzzify(infer(self.rules, error, self._fuel_var), self.config.defuzz)
            outlet = defuzzify(infer(self.rules, error, self._outlet_var), self.config.defuzz)
        except NoRuleFiredError:
            # Unreachable under a complete term partition; hold and flag.
            self.fault = True
            return self._last
        self.fault = False
        cmd = ValveCommand(
            fuel_pct=min(max(fuel, 0.0), 100.0),
            outlet_pct=min(max(outlet, 0.0), 100.0),
        )
        self._last = cmd
        return cmd


def control_step(
    cfg: ControllerConfig, measured_pressure: float, rules: RuleBase | None = None
) -> ValveCommand:
    """Single stateless control evaluation (fresh controller per call)."""
    return SplitRangeController(cfg, rules).step(measured_pressure)
