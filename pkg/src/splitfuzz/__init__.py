"""Fuzzy split-range pressure control workbench."""

from .controller import (
    ControllerConfig,
    SplitRangeController,
    ValveCommand,
    compute_error,
    control_step,
    convert_units,
    default_error_variable,
    default_rules,
    default_valve_variable,
)
from .fuzzy import (
    AggregatedSet,
    DefuzzMethod,
    FuzzyError,
    LinguisticVariable,
    MembershipFunction,
    NoRuleFiredError,
    Rule,
    RuleBase,
    Universe,
    alpha_cut,
    alpha_intersection,
    alpha_union,
    defuzzify,
    evaluate_mf,
    infer,
)
from .metrics import MetricsReport, evaluate
from .plant import DiscreteValveModel, PlantConfig, PlantState, run_closed_loop
from .scenario import SweepConfig, SweepReport, compare_methods, run_sweep
from .sysid import ArxModel, ArxOrder, SignalDataset, fit_arx, fit_percent, generate_valve_data, grid_search

__version__ = "0.1.0"
