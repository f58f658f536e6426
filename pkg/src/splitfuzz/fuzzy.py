"""Fuzzy set machinery: membership functions, linguistic variables, alpha-cuts,
Mamdani rule evaluation, and the five defuzzification methods.

Everything here is immutable after construction and free of hidden state, so
inference and defuzzification can run concurrently from any number of callers.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np


class FuzzyError(ValueError):
    """Base class for fuzzy-domain errors."""


class NoRuleFiredError(FuzzyError):
    """Raised when an aggregated set is identically zero (no rule fired)."""


@dataclass(frozen=True)
class Universe:
    """Uniformly sampled interval a linguistic variable lives on."""

    lower: float
    upper: float
    resolution: int = 1001

    def __post_init__(self):
        if not self.lower < self.upper:
            raise FuzzyError(f"universe requires lower < upper, got [{self.lower}, {self.upper}]")
        if self.resolution < 2:
            raise FuzzyError(f"universe resolution must be >= 2, got {self.resolution}")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.resolution)

    @property
    def step(self) -> float:
        return (self.upper - self.lower) / (self.resolution - 1)

    def clamp(self, x: float) -> float:
        return min(max(x, self.lower), self.upper)


@dataclass(frozen=True)
class MembershipFunction:
    """Piecewise-linear membership function.

    ``kind`` is "triangle" (3 breakpoints) or "trapezoid" (4 breakpoints).
    Breakpoints must be non-decreasing; repeated breakpoints yield vertical
    edges, which is how shoulder terms saturating at a universe bound are
    expressed (e.g. ``trapezoid(-5, -5, -5, -2.5)``).
    """

    kind: str
    breakpoints: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        expected = {"triangle": 3, "trapezoid": 4}.get(self.kind)
        if expected is None:
            raise FuzzyError(f"unknown membership kind {self.kind!r}")
        if len(pts) != expected:
            raise FuzzyError(f"{self.kind} needs {expected} breakpoints, got {len(pts)}")
        if any(b < a for a, b in zip(pts, pts[1:])):
            raise FuzzyError(f"breakpoints must be non-decreasing, got {pts}")

    @classmethod
    def triangle(cls, a: float, b: float, c: float) -> "MembershipFunction":
        return cls("triangle", (a, b, c))

    @classmethod
    def trapezoid(cls, a: float, b: float, c: float, d: float) -> "MembershipFunction":
        return cls("trapezoid", (a, b, c, d))

    def __call__(self, x) -> np.ndarray | float:
        """Evaluate the membership degree at ``x`` (scalar or array) in [0, 1]."""
        if self.kind == "triangle":
            a, peak = self.breakpoints[0], self.breakpoints[1]
            peak_lo = peak_hi = peak
            d = self.breakpoints[2]
        else:
            a, peak_lo, peak_hi, d = self.breakpoints

        xs = np.asarray(x, dtype=float)
        # Rising edge: vertical when a == peak_lo.
        if peak_lo > a:
            up = np.clip((xs - a) / (peak_lo - a), 0.0, 1.0)
        else:
            up = (xs >= peak_lo).astype(float)
        # Falling edge: vertical when d == peak_hi.
        if d > peak_hi:
            down = np.clip((d - xs) / (d - peak_hi), 0.0, 1.0)
        else:
            down = (xs <= peak_hi).astype(float)
        mu = np.minimum(up, down)
        return float(mu) if np.isscalar(x) else mu

    @property
    def support(self) -> tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]


def evaluate_mf(mf: MembershipFunction, x: float) -> float:
    """Degree of membership of ``x``; 0 outside the breakpoint span."""
    return float(mf(float(x)))


@dataclass(frozen=True)
class LinguisticVariable:
    """Named variable with an ordered set of labelled terms over one universe."""

    name: str
    universe: Universe
    terms: tuple[tuple[str, MembershipFunction], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((str(l), m) for l, m in self.terms))
        labels = [l for l, _ in self.terms]
        if len(set(labels)) != len(labels):
            raise FuzzyError(f"duplicate term labels in variable {self.name!r}")
        if not self.terms:
            raise FuzzyError(f"variable {self.name!r} has no terms")
        grid = self.universe.grid
        coverage = np.zeros_like(grid)
        for _, mf in self.terms:
            coverage = np.maximum(coverage, mf(grid))
        if np.any(coverage <= 0.0):
            hole = grid[int(np.argmin(coverage))]
            raise FuzzyError(
                f"terms of {self.name!r} do not cover the universe (zero membership near {hole:g})"
            )

    def term(self, label: str) -> MembershipFunction:
        for l, mf in self.terms:
            if l == label:
                return mf
        raise FuzzyError(f"variable {self.name!r} has no term {label!r}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.terms)

    def sampled_term(self, label: str) -> np.ndarray:
        """Term membership evaluated on the universe grid (cached)."""
        return _sampled_curve(self.term(label), self.universe)

    def fuzzify(self, x: float) -> dict[str, float]:
        """Degrees of every term at ``x`` clamped into the universe."""
        xc = self.universe.clamp(float(x))
        return {l: float(mf(xc)) for l, mf in self.terms}


@lru_cache(maxsize=512)
def _sampled_curve(mf: "MembershipFunction", universe: Universe) -> np.ndarray:
    curve = mf(universe.grid)
    curve.setflags(write=False)
    return curve


@dataclass(frozen=True)
class AggregatedSet:
    """Max-aggregated Mamdani output surface on a sampled universe."""

    universe: Universe
    degrees: np.ndarray

    def __post_init__(self):
        deg = np.asarray(self.degrees, dtype=float)
        if deg.shape != (self.universe.resolution,):
            raise FuzzyError(
                f"degrees length {deg.shape} does not match resolution {self.universe.resolution}"
            )
        if np.any(deg < -1e-12) or np.any(deg > 1.0 + 1e-12):
            raise FuzzyError("aggregated degrees must lie in [0, 1]")
        deg = np.clip(deg, 0.0, 1.0)
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)


class DefuzzMethod(str, Enum):
    """The five defuzzification strategies compared in the study."""

    CENTROID = "centroid"
    BISECTOR = "bisector"
    MOM = "mom"
    LOM = "lom"
    SOM = "som"

    @classmethod
    def parse(cls, name: str) -> "DefuzzMethod":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise FuzzyError(f"unknown defuzzification method {name!r}; valid: {valid}") from None


@dataclass(frozen=True)
class Rule:
    """Single-antecedent IF-THEN rule with one or more consequents."""

    antecedent: tuple[str, str]          # (input variable name, term label)
    consequents: tuple[tuple[str, str], ...]  # ((output variable name, term label), ...)

    def __post_init__(self):
        object.__setattr__(self, "antecedent", (str(self.antecedent[0]), str(self.antecedent[1])))
        object.__setattr__(
            self, "consequents", tuple((str(v), str(t)) for v, t in self.consequents)
        )
        if not self.consequents:
            raise FuzzyError("rule needs at least one consequent")


@dataclass(frozen=True)
class RuleBase:
    """Rule collection bound to its input variable and output variables."""

    input_var: LinguisticVariable
    output_vars: tuple[LinguisticVariable, ...]
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "output_vars", tuple(self.output_vars))
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise FuzzyError("rule base is empty")
        outputs = {v.name: v for v in self.output_vars}
        for rule in self.rules:
            var_name, label = rule.antecedent
            if var_name != self.input_var.name:
                raise FuzzyError(f"rule antecedent references unknown variable {var_name!r}")
            self.input_var.term(label)  # raises if missing
            for out_name, out_label in rule.consequents:
                if out_name not in outputs:
                    raise FuzzyError(f"rule consequent references unknown variable {out_name!r}")
                outputs[out_name].term(out_label)

    def output_var(self, name: str) -> LinguisticVariable:
        for v in self.output_vars:
            if v.name == name:
                return v
        raise FuzzyError(f"rule base has no output variable {name!r}")


def alpha_cut(mf: MembershipFunction, alpha: float, universe: Universe) -> np.ndarray:
    """Sampled universe points whose membership degree is >= alpha.

    alpha must lie in (0, 1]; the cut of the pointwise membership is returned
    as a sorted array of grid points.
    """
    if not 0.0 < alpha <= 1.0:
        raise FuzzyError(f"alpha must be in (0, 1], got {alpha}")
    grid = universe.grid
    return grid[mf(grid) >= alpha]


def alpha_union(
    a: MembershipFunction, b: MembershipFunction, alpha: float, universe_a: Universe,
    universe_b: Universe | None = None,
) -> np.ndarray:
    """Alpha-cut of the union: equals the union of the individual cuts."""
    _require_same_universe(universe_a, universe_b)
    return np.union1d(alpha_cut(a, alpha, universe_a), alpha_cut(b, alpha, universe_a))


def alpha_intersection(
    a: MembershipFunction, b: MembershipFunction, alpha: float, universe_a: Universe,
    universe_b: Universe | None = None,
) -> np.ndarray:
    """Alpha-cut of the intersection: equals the intersection of the cuts."""
    _require_same_universe(universe_a, universe_b)
    return np.intersect1d(alpha_cut(a, alpha, universe_a), alpha_cut(b, alpha, universe_a))


def _require_same_universe(ua: Universe, ub: Universe | None):
    if ub is not None and ub != ua:
        raise FuzzyError(f"mismatched universes: {ua} vs {ub}")


def infer(rules: RuleBase, input_value: float, output_var: LinguisticVariable) -> AggregatedSet:
    """Mamdani inference for one output variable.

    Each rule fires at the degree of its antecedent term at ``input_value``
    (clamped into the input universe); its consequent term for ``output_var``
    is min-clipped at that strength, and all clipped consequents are
    max-aggregated over the sampled output universe.
    """
    degrees = np.zeros(output_var.universe.resolution)
    x = rules.input_var.universe.clamp(float(input_value))
    for rule in rules.rules:
        strength = evaluate_mf(rules.input_var.term(rule.antecedent[1]), x)
        if strength <= 0.0:
            continue
        for out_name, out_label in rule.consequents:
            if out_name != output_var.name:
                continue
            clipped = np.minimum(output_var.sampled_term(out_label), strength)
            np.maximum(degrees, clipped, out=degrees)
    return AggregatedSet(output_var.universe, degrees)


# Maxima-set tolerance: Mamdani clipping produces exact plateau values, the
# tolerance only guards against float noise from downstream arithmetic.
_MAX_TOL = 1e-12


def defuzzify(aggregated: AggregatedSet, method: DefuzzMethod | str) -> float:
    """Collapse an aggregated set to one crisp value.

    centroid: sum(x*mu)/sum(mu) over samples.
    bisector: smallest sample where the cumulative area reaches half the total.
    mom/som/lom: mean / smallest / largest of the samples attaining the max.
    """
    method = DefuzzMethod.parse(method) if not isinstance(method, DefuzzMethod) else method
    mu = aggregated.degrees
    total = float(mu.sum())
    if total <= 0.0:
        raise NoRuleFiredError("aggregated set is identically zero; no rule fired")
    grid = aggregated.universe.grid

    if method is DefuzzMethod.CENTROID:
        return float((grid * mu).sum() / total)
    if method is DefuzzMethod.BISECTOR:
        # Trapezoid-rule cumulative area (the uniform step cancels out).
        cum = np.cumsum(mu) - 0.5 * mu - 0.5 * mu[0]
        idx = int(np.searchsorted(cum, 0.5 * cum[-1]))
        return float(grid[min(idx, len(grid) - 1)])
    peak = float(mu.max())
    maxima = grid[mu >= peak - _MAX_TOL]
    if method is DefuzzMethod.MOM:
        return float(maxima.mean())
    if method is DefuzzMethod.LOM:
        return float(maxima[-1])
    return float(maxima[0])  # SOM
