"""Command-line entry point: single simulation, batch sweep, system
identification, and serving the HTTP API.

Outputs are reproducible: re-running a subcommand with identical flags and
seed produces byte-identical data files, named from a hash of the effective
configuration. SPLITFUZZ_OUT sets the default output directory.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

from .config import ConfigError, load_config
from .controller import ControllerConfig, default_rules
from .fuzzy import DefuzzMethod, FuzzyError
from .metrics import MetricsReport, evaluate
from .plant import PlantConfig, PlantError, run_closed_loop
from .scenario import (
    DEFAULT_SEED,
    SweepConfig,
    compare_methods,
    ranking_summary_csv,
    run_sweep,
)
from .sysid import generate_valve_data, fit_arx, fit_percent, grid_search

USAGE_ERROR = 2


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("SPLITFUZZ_OUT", ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _load_base(args) -> tuple:
    if args.config:
        return load_config(args.config)
    return default_rules(), ControllerConfig(), PlantConfig()


def _plant_overrides(args, plant: PlantConfig) -> PlantConfig:
    mapping = {
        "initial": "initial_pressure", "duration": "duration", "dt": "dt",
        "fuel_gain": "fuel_gain", "outlet_gain": "outlet_gain",
        "fuel_flow": "fuel_flow", "base_outflow": "base_outflow",
        "noise": "noise_std", "delay": "delay",
    }
    updates = {}
    for flag, field_name in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            updates[field_name] = value
    if getattr(args, "actuator", None) is not None:
        updates["actuator_dynamics"] = args.actuator == "on"
    return replace(plant, **updates) if updates else plant


def cmd_simulate(args) -> int:
    rules, controller, plant = _load_base(args)
    if args.setpoint is not None:
        controller = replace(controller, setpoint=args.setpoint)
    if args.method is not None:
        controller = replace(controller, defuzz=DefuzzMethod.parse(args.method))
    plant = _plant_overrides(args, plant)

    result = run_closed_loop(plant, controller, rules, seed=args.seed)
    report = evaluate(result.pressure, controller.setpoint, plant.dt, float(args.band))

    out = _out_dir(args)
    tag = _config_hash({"plant": asdict(plant), "controller": asdict(controller),
                        "seed": args.seed, "band": args.band})
    series_path = out / f"sim_{tag}_series.csv"
    metrics_path = out / f"sim_{tag}_metrics.csv"
    series_path.write_text(result.to_csv())
    ipe = controller.setpoint - plant.initial_pressure
    metrics_path.write_text(MetricsReport.CSV_HEADER + "\n" + report.csv_row(ipe) + "\n")
    if args.plot:
        _write_plots(out, tag, result, controller.setpoint)
    print(f"wrote {series_path} and {metrics_path}")
    return 0


def _write_plots(out: Path, tag: str, result, setpoint: float) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(result.t, result.pressure, label="pressure")
    ax.axhline(setpoint, color="tab:orange", linestyle="--", label="setpoint")
    ax.set_xlabel("time, s")
    ax.set_ylabel("pressure, bar")
    ax.legend()
    fig.savefig(out / f"sim_{tag}_pressure.svg")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(result.t, result.fuel_eff, label="fuel valve")
    ax.plot(result.t, result.outlet_eff, label="outlet valve")
    ax.set_xlabel("time, s")
    ax.set_ylabel("position, %")
    ax.legend()
    fig.savefig(out / f"sim_{tag}_valves.svg")
    plt.close(fig)


def cmd_sweep(args) -> int:
    rules, controller, plant = _load_base(args)
    setpoint = args.setpoint if args.setpoint is not None else controller.setpoint
    plant = _plant_overrides(args, plant)
    methods = tuple(DefuzzMethod.parse(m) for m in args.methods.split(",")) \
        if args.methods else tuple(DefuzzMethod)
    seeds = tuple(int(s) for s in args.seeds.split(",")) if args.seeds else (args.seed,)

    cfg = SweepConfig(setpoint=setpoint, methods=methods, seeds=seeds, plant=plant,
                      band_pct=float(args.band))
    total = len(cfg.methods) * len(cfg.ipe_values) * len(cfg.seeds)
    done = [0]

    def progress(method, ipe, seed):
        done[0] += 1
        print(f"\r[{done[0]}/{total}] {method.value} ipe={ipe:+.1f} seed={seed}   ",
              end="", file=sys.stderr, flush=True)

    report = run_sweep(cfg, rules, progress=progress)
    print(file=sys.stderr)

    out = _out_dir(args)
    tag = _config_hash({"plant": asdict(plant), "setpoint": setpoint,
                        "methods": [m.value for m in methods], "seeds": seeds,
                        "band": args.band})
    written = []
    for method in methods:
        path = out / f"sweep_{tag}_{method.value}.csv"
        path.write_text(report.method_table(method))
        written.append(path)
    summary = out / f"sweep_{tag}_summary.csv"
    summary.write_text(ranking_summary_csv(compare_methods(report), methods))
    written.append(summary)
    print("\n".join(str(p) for p in written))
    return 0


def cmd_sysid(args) -> int:
    data = generate_valve_data(n=args.n, dt=args.dt, seed=args.seed)
    result = grid_search(data)
    work, valid = data.split_half()
    best_fit = fit_percent(fit_arx(work, result.best), valid)

    out = _out_dir(args)
    tag = _config_hash({"n": args.n, "dt": args.dt, "seed": args.seed})
    data_path = out / f"sysid_{tag}_data.csv"
    grid_path = out / f"sysid_{tag}_grid.csv"
    best_path = out / f"sysid_{tag}_best.json"
    data_path.write_text(data.to_csv())
    grid_path.write_text(result.to_csv())
    best_path.write_text(json.dumps({
        "na": result.best.na, "nb": result.best.nb, "nk": result.best.nk,
        "misfit_pct": round(result.best_misfit, 6),
        "validation_fit_pct": round(best_fit, 6),
    }, indent=2) + "\n")
    print(f"best order na={result.best.na} nb={result.best.nb} nk={result.best.nk} "
          f"fit={best_fit:.2f}%")
    print("\n".join(str(p) for p in (data_path, grid_path, best_path)))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    rules, controller, plant = _load_base(args)
    app = create_app(rules=rules, controller_defaults=controller, plant_defaults=plant)

    config = uvicorn.Config(app, host=args.host, port=args.port, log_level="warning")
    server = uvicorn.Server(config)

    import socket
    if args.port == 0:
        # Bind first so the ephemeral port can be printed before serving.
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((args.host, 0))
        print(f"listening on {args.host}:{sock.getsockname()[1]}", flush=True)
        server.run(sockets=[sock])
    else:
        print(f"listening on {args.host}:{args.port}", flush=True)
        server.run()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitfuzz",
        description="Fuzzy split-range pressure control workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML configuration document")
        p.add_argument("--out", help="output directory (default $SPLITFUZZ_OUT or .)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sim = sub.add_parser("simulate", help="run one closed-loop simulation")
    common(sim)
    sim.add_argument("--setpoint", type=float)
    sim.add_argument("--initial", type=float, help="initial pressure, bar")
    sim.add_argument("--duration", type=float)
    sim.add_argument("--dt", type=float)
    sim.add_argument("--method", help="centroid|bisector|mom|lom|som")
    sim.add_argument("--fuel-gain", dest="fuel_gain", type=float)
    sim.add_argument("--outlet-gain", dest="outlet_gain", type=float)
    sim.add_argument("--fuel-flow", dest="fuel_flow", type=float)
    sim.add_argument("--base-outflow", dest="base_outflow", type=float)
    sim.add_argument("--noise", type=float, help="measurement noise std, bar")
    sim.add_argument("--delay", type=float)
    sim.add_argument("--actuator", choices=("on", "off"))
    sim.add_argument("--band", choices=("2", "5"), default="2")
    sim.add_argument("--plot", action="store_true", help="write SVG plots")
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="run the initial-pressure x method sweep")
    common(sw)
    sw.add_argument("--setpoint", type=float)
    sw.add_argument("--methods", help="comma-separated method subset")
    sw.add_argument("--seeds", help="comma-separated seed list")
    sw.add_argument("--duration", type=float)
    sw.add_argument("--dt", type=float)
    sw.add_argument("--fuel-gain", dest="fuel_gain", type=float)
    sw.add_argument("--outlet-gain", dest="outlet_gain", type=float)
    sw.add_argument("--fuel-flow", dest="fuel_flow", type=float)
    sw.add_argument("--base-outflow", dest="base_outflow", type=float)
    sw.add_argument("--noise", type=float)
    sw.add_argument("--delay", type=float)
    sw.add_argument("--actuator", choices=("on", "off"))
    sw.add_argument("--band", choices=("2", "5"), default="2")
    sw.set_defaults(func=cmd_sweep)

    sid = sub.add_parser("sysid", help="generate valve data and run the ARX grid")
    common(sid)
    sid.add_argument("--n", type=int, default=1000)
    sid.add_argument("--dt", type=float, default=0.5)
    sid.set_defaults(func=cmd_sysid)

    srv = sub.add_parser("serve", help="serve the HTTP API")
    common(srv)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FuzzyError, PlantError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
