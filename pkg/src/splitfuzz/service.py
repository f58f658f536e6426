"""HTTP API for the web UI: simulation, sweep, and membership introspection.

Stateless by construction: shared configuration is immutable after startup,
every request owns its simulation state, and identical requests (same seed)
return identical bodies. Validation failures return 400 with field-level
messages; physically infeasible requests return 422.
"""
from __future__ import annotations

from dataclasses import asdict, replace
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .controller import ControllerConfig, RuleBase, default_rules
from .fuzzy import DefuzzMethod, FuzzyError
from .metrics import evaluate
from .plant import PlantConfig, PlantError, run_closed_loop
from .scenario import DEFAULT_SEED, SweepConfig, run_sweep


class SweepRequest(BaseModel):
    setpoint: float = Field(default=5.0, gt=0.0, le=10.0)
    methods: Optional[list[str]] = None
    seeds: list[int] = [DEFAULT_SEED]
    band_pct: float = 2.0
    noise: Optional[float] = Field(default=None, ge=0.0)


class SimulateRequest(BaseModel):
    setpoint: float = Field(default=5.0, gt=0.0, le=10.0)
    initial_pressure: float = 9.53
    total_time: float = Field(default=25.0, gt=0.0, le=600.0)
    time_step: float = Field(default=0.1, gt=0.0, le=5.0)
    method: str = "centroid"
    fuel_gain: float = Field(default=2.75, ge=0.0)
    outlet_gain: float = Field(default=2.75, ge=0.0)
    fuel_flow: float = Field(default=1.0, ge=0.0)
    base_outflow: float = Field(default=0.500596, ge=0.0)
    noise: float = Field(default=0.005, ge=0.0)
    show_membership: bool = False
    seed: int = DEFAULT_SEED
    actuator_dynamics: bool = False
    delay: float = Field(default=0.5, ge=0.0)
    band_pct: float = 2.0


def create_app(rules: RuleBase | None = None,
               controller_defaults: ControllerConfig | None = None,
               plant_defaults: PlantConfig | None = None) -> FastAPI:
    rules = rules if rules is not None else default_rules()
    plant_defaults = plant_defaults if plant_defaults is not None else PlantConfig()

    app = FastAPI(title="splitfuzz", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in e["loc"] if p != "body"),
             "message": e["msg"]}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": errors})

    def membership_payload(points: int = 201) -> list[dict]:
        payload = []
        for var in (rules.input_var, *rules.output_vars):
            stride = max(1, (var.universe.resolution - 1) // (points - 1))
            grid = var.universe.grid[::stride]
            payload.append({
                "name": var.name,
                "lower": var.universe.lower,
                "upper": var.universe.upper,
                "x": [float(v) for v in grid],
                "terms": [
                    {"label": label, "mu": [float(v) for v in mf(grid)]}
                    for label, mf in var.terms
                ],
            })
        return payload

    @app.get("/api/methods")
    def methods():
        return {"methods": [m.value for m in DefuzzMethod]}

    @app.get("/api/membership")
    def membership(points: int = 201):
        return {"variables": membership_payload(points)}

    @app.post("/api/simulate")
    def simulate(req: SimulateRequest):
        try:
            method = DefuzzMethod.parse(req.method)
        except FuzzyError as exc:
            return JSONResponse(status_code=400,
                                content={"errors": [{"field": "method", "message": str(exc)}]})
        if not 0.0 <= req.initial_pressure <= 10.0:
            return JSONResponse(status_code=422, content={
                "errors": [{"field": "initial_pressure",
                            "message": "initial pressure must lie in [0, 10] bar"}]})
        if req.band_pct not in (2.0, 5.0):
            return JSONResponse(status_code=400, content={
                "errors": [{"field": "band_pct", "message": "band must be 2 or 5"}]})
        try:
            plant = replace(
                plant_defaults,
                fuel_gain=req.fuel_gain, outlet_gain=req.outlet_gain,
                fuel_flow=req.fuel_flow, base_outflow=req.base_outflow,
                noise_std=req.noise, dt=req.time_step, duration=req.total_time,
                initial_pressure=req.initial_pressure,
                actuator_dynamics=req.actuator_dynamics, delay=req.delay,
            )
            controller = ControllerConfig(setpoint=req.setpoint, defuzz=method)
        except (PlantError, FuzzyError) as exc:
            return JSONResponse(status_code=422,
                                content={"errors": [{"field": "", "message": str(exc)}]})

        result = run_closed_loop(plant, controller, rules, seed=req.seed)
        report = evaluate(result.pressure, req.setpoint, plant.dt, req.band_pct)
        body = {
            "series": {
                "t": result.t.tolist(),
                "setpoint": result.setpoint.tolist(),
                "pressure": result.pressure.tolist(),
                "fuel_cmd": result.fuel_cmd.tolist(),
                "outlet_cmd": result.outlet_cmd.tolist(),
                "fuel_eff": result.fuel_eff.tolist(),
                "outlet_eff": result.outlet_eff.tolist(),
            },
            "metrics": asdict(report),
            "fault": bool(result.fault.any()),
        }
        if req.show_membership:
            body["membership"] = membership_payload()
        return body

    @app.post("/api/sweep")
    def sweep(req: SweepRequest):
        methods = (tuple(DefuzzMethod.parse(m) for m in req.methods)
                   if req.methods else tuple(DefuzzMethod))
        plant = plant_defaults if req.noise is None else replace(plant_defaults,
                                                                 noise_std=req.noise)
        cfg = SweepConfig(setpoint=req.setpoint, methods=methods,
                          seeds=tuple(req.seeds), plant=plant, band_pct=req.band_pct)
        report = run_sweep(cfg, rules)
        cells = [
            {"method": c.method.value, "ipe": c.ipe, "seed": c.seed,
             "metrics": asdict(c.metrics)}
            for c in report.cells
        ]
        aggregates = [
            {"method": m.value, "ipe": ipe,
             "metrics": asdict(report.aggregate(m, ipe))}
            for m in cfg.methods for ipe in cfg.ipe_values
        ]
        return {"cells": cells, "aggregates": aggregates}

    return app


app = create_app()
