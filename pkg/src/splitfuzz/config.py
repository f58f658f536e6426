"""Declarative TOML configuration: linguistic variables, breakpoints, rules,
and plant/controller defaults, so rule bases can be swapped without touching
code. Compiled-in defaults are used for anything the document omits.

Document shape::

    [controller]
    setpoint = 5.0
    method = "centroid"

    [plant]
    dt = 0.1
    fuel_gain = 2.75
    # ... any PlantConfig field

    [variables.pressure_error]
    domain = [-5.0, 5.0]
    resolution = 1001
    terms = [
        { label = "very_negative", kind = "trapezoid", points = [-5, -5, -5, -2.5] },
        { label = "negative", kind = "triangle", points = [-5, -2.5, 0] },
        # ...
    ]

    [[rules]]
    when = "very_positive"
    fuel_valve = "fully_open"
    outlet_valve = "fully_closed"

"pressure_error" term "small" is the rule table's "almost absent"; the loader
accepts either label in rules.
"""
from __future__ import annotations

import sys
from dataclasses import fields as dataclass_fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .controller import (
    ControllerConfig,
    ERROR_VAR,
    FUEL_VAR,
    OUTLET_VAR,
    default_error_variable,
    default_valve_variable,
)
from .fuzzy import (
    DefuzzMethod,
    FuzzyError,
    LinguisticVariable,
    MembershipFunction,
    Rule,
    RuleBase,
    Universe,
)
from .plant import PlantConfig

TERM_ALIASES = {"almost_absent": "small"}


class ConfigError(ValueError):
    pass


def _parse_variable(name: str, spec: dict) -> LinguisticVariable:
    try:
        lo, hi = spec["domain"]
        resolution = int(spec.get("resolution", 1001))
        terms = []
        for t in spec["terms"]:
            mf = MembershipFunction(t["kind"], tuple(float(p) for p in t["points"]))
            terms.append((t["label"], mf))
        return LinguisticVariable(name, Universe(float(lo), float(hi), resolution), tuple(terms))
    except (KeyError, TypeError, FuzzyError) as exc:
        raise ConfigError(f"invalid variable {name!r}: {exc}") from exc


def _parse_rules(raw_rules: list, input_var: LinguisticVariable,
                 fuel: LinguisticVariable, outlet: LinguisticVariable) -> RuleBase:
    rules = []
    for i, r in enumerate(raw_rules):
        try:
            when = TERM_ALIASES.get(r["when"], r["when"])
            rules.append(Rule(
                antecedent=(input_var.name, when),
                consequents=((fuel.name, r[fuel.name]), (outlet.name, r[outlet.name])),
            ))
        except KeyError as exc:
            raise ConfigError(f"rule #{i + 1} is missing key {exc}") from exc
    try:
        return RuleBase(input_var=input_var, output_vars=(fuel, outlet), rules=tuple(rules))
    except FuzzyError as exc:
        raise ConfigError(str(exc)) from exc


def _filter_fields(cls, raw: dict, section: str) -> dict:
    allowed = {f.name for f in dataclass_fields(cls)}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
    return raw


def load_config(path: str | Path) -> tuple[RuleBase, ControllerConfig, PlantConfig]:
    """Parse a TOML document into (rules, controller config, plant config)."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    return build_from_document(doc)


def build_from_document(doc: dict) -> tuple[RuleBase, ControllerConfig, PlantConfig]:
    variables = doc.get("variables", {})
    error_var = (_parse_variable(ERROR_VAR, variables[ERROR_VAR])
                 if ERROR_VAR in variables else default_error_variable())
    fuel_var = (_parse_variable(FUEL_VAR, variables[FUEL_VAR])
                if FUEL_VAR in variables else default_valve_variable(FUEL_VAR))
    outlet_var = (_parse_variable(OUTLET_VAR, variables[OUTLET_VAR])
                  if OUTLET_VAR in variables else default_valve_variable(OUTLET_VAR))

    if "rules" in doc:
        rules = _parse_rules(doc["rules"], error_var, fuel_var, outlet_var)
    else:
        from .controller import default_rules
        if ERROR_VAR in variables or FUEL_VAR in variables or OUTLET_VAR in variables:
            # Custom variables with the stock rule table.
            default = default_rules()
            rules = RuleBase(input_var=error_var, output_vars=(fuel_var, outlet_var),
                             rules=default.rules)
        else:
            rules = default_rules()

    raw_controller = dict(doc.get("controller", {}))
    if "method" in raw_controller:
        raw_controller["defuzz"] = DefuzzMethod.parse(raw_controller.pop("method"))
    try:
        controller = ControllerConfig(**_filter_fields(ControllerConfig, raw_controller,
                                                       "controller"))
        plant = PlantConfig(**_filter_fields(PlantConfig, dict(doc.get("plant", {})), "plant"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return rules, controller, plant
