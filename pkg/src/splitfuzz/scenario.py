"""Batch experiment runner: the 21-initial-pressure x 5-method sweep with
per-cell metrics, seed-averaged aggregates, and method comparison tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import numpy as np

from .controller import ControllerConfig, RuleBase, default_rules
from .fuzzy import DefuzzMethod
from .metrics import MetricsReport, evaluate
from .plant import PlantConfig, SimulationResult, run_closed_loop

DEFAULT_SEED = 42
DEFAULT_IPE_VALUES = tuple(round(-5.0 + 0.5 * i, 1) for i in range(21))

_NUMERIC_FIELDS = ("mse", "rmse", "mae", "iae", "ise", "itae", "sse", "over_under_pct")
_OPTIONAL_FIELDS = ("rise_time", "fall_time", "settling_time")


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    setpoint: float = 5.0
    ipe_values: tuple[float, ...] = DEFAULT_IPE_VALUES
    methods: tuple[DefuzzMethod, ...] = tuple(DefuzzMethod)
    seeds: tuple[int, ...] = (DEFAULT_SEED,)
    plant: PlantConfig = field(default_factory=PlantConfig)
    band_pct: float = 2.0

    def __post_init__(self):
        if not self.ipe_values:
            raise ScenarioError("ipe list must be non-empty")
        object.__setattr__(self, "ipe_values", tuple(float(v) for v in self.ipe_values))
        object.__setattr__(
            self, "methods",
            tuple(DefuzzMethod.parse(m) if not isinstance(m, DefuzzMethod) else m
                  for m in self.methods),
        )
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        for ipe in self.ipe_values:
            initial = self.setpoint - ipe
            if not 0.0 <= initial <= 10.0:
                raise ScenarioError(
                    f"ipe {ipe} puts the initial pressure at {initial} bar, outside [0, 10]"
                )


@dataclass(frozen=True)
class SweepCell:
    method: DefuzzMethod
    ipe: float
    seed: int
    metrics: MetricsReport
    result: SimulationResult
    fault: bool


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    cells: tuple[SweepCell, ...]

    def cell(self, method: DefuzzMethod, ipe: float, seed: int) -> SweepCell:
        for c in self.cells:
            if c.method is method and c.ipe == ipe and c.seed == seed:
                return c
        raise ScenarioError(f"no cell for ({method}, {ipe}, {seed})")

    def aggregate(self, method: DefuzzMethod, ipe: float) -> MetricsReport:
        """Seed-mean of each metric; optional metrics go absent if absent in
        any seed (a run that failed to settle once is reported as unsettled)."""
        reports = [c.metrics for c in self.cells if c.method is method and c.ipe == ipe]
        if not reports:
            raise ScenarioError(f"no cells for ({method}, {ipe})")
        values = {f: float(np.mean([getattr(r, f) for r in reports])) for f in _NUMERIC_FIELDS}
        for f in _OPTIONAL_FIELDS:
            vals = [getattr(r, f) for r in reports]
            values[f] = None if any(v is None for v in vals) else float(np.mean(vals))
        return MetricsReport(direction=reports[0].direction, **values)

    def method_table(self, method: DefuzzMethod) -> str:
        """Per-method comparison table as CSV, one row per initial pressure error."""
        lines = [MetricsReport.CSV_HEADER]
        for ipe in self.config.ipe_values:
            lines.append(self.aggregate(method, ipe).csv_row(ipe))
        return "\n".join(lines) + "\n"


def _cell_seed(base_seed: int, method: DefuzzMethod, ipe: float) -> int:
    """Independent stream per cell, keyed by cell identity so that removing
    one cell from the sweep cannot change any other cell's values."""
    method_id = list(DefuzzMethod).index(method)
    ipe_key = int(round((ipe + 1000.0) * 1000))  # SeedSequence wants non-negative ints
    seq = np.random.SeedSequence((abs(base_seed), method_id, ipe_key))
    return int(seq.generate_state(1)[0])


def run_sweep(cfg: SweepConfig, rules: RuleBase | None = None,
              progress=None) -> SweepReport:
    """Run every (method, ipe, seed) closed loop independently.

    Deterministic per seed; cells are independent (removing one changes no
    other), so the loop order is irrelevant to the results.
    """
    rules = rules if rules is not None else default_rules()
    cells = []
    for method in cfg.methods:
        controller = ControllerConfig(setpoint=cfg.setpoint, defuzz=method)
        for ipe in cfg.ipe_values:
            plant = replace(cfg.plant, initial_pressure=cfg.setpoint - ipe)
            for seed in cfg.seeds:
                result = run_closed_loop(plant, controller, rules,
                                         seed=_cell_seed(seed, method, ipe))
                report = evaluate(result.pressure, cfg.setpoint, plant.dt, cfg.band_pct)
                cells.append(SweepCell(method, ipe, seed, report, result,
                                       fault=bool(result.fault.any())))
                if progress is not None:
                    progress(method, ipe, seed)
    return SweepReport(cfg, tuple(cells))


@dataclass(frozen=True)
class MethodRanking:
    per_metric_means: dict          # metric -> {method: mean across IPEs}
    best_method: dict               # metric -> method with the smallest mean
    never_settles: tuple[DefuzzMethod, ...]  # methods with any absent settling time


def compare_methods(report: SweepReport) -> MethodRanking:
    """Per-metric means across IPEs per method, best method per metric, and
    the set of methods that fail to settle somewhere."""
    means: dict = {f: {} for f in _NUMERIC_FIELDS}
    flagged = []
    for method in report.config.methods:
        aggs = [report.aggregate(method, ipe) for ipe in report.config.ipe_values]
        for f in _NUMERIC_FIELDS:
            means[f][method] = float(np.mean([getattr(a, f) for a in aggs]))
        if any(a.settling_time is None for a in aggs):
            flagged.append(method)
    best = {f: min(vals, key=vals.get) for f, vals in means.items() if vals}
    return MethodRanking(per_metric_means=means, best_method=best,
                         never_settles=tuple(flagged))


def ranking_summary_csv(ranking: MethodRanking, methods) -> str:
    lines = ["metric," + ",".join(m.value for m in methods) + ",best"]
    for metric, per_method in ranking.per_metric_means.items():
        row = [metric]
        row += [f"{per_method[m]:.6f}" for m in methods]
        row.append(ranking.best_method[metric].value)
        lines.append(",".join(row))
    lines.append("never_settles," + ";".join(m.value for m in ranking.never_settles))
    return "\n".join(lines) + "\n"
