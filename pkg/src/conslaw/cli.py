"""Command-line experiment runner.

Usage::

    conslaw run CONFIG.json
    conslaw preset NAME [--out DIR] [--seed N]
    conslaw list-presets [NAME]

The exit status is 0 exactly when every enabled check passes.

Config schema (JSON)::

    {
      "model":   {"name": "burgers", "params": {}},
      "initial": {"type": "riemann", "x0": 0.0, "left": [1.0], "right": [0.0]}
               | {"type": "step-train", "breakpoints": [...], "states": [[...], ...]}
               | {"type": "smooth-bump", "base": [...], "amplitude": [...],
                  "positions": [...], "width": 0.2, "x_range": [a, b], "mesh": 0.05},
      "solver":  {"name": "front_tracking" | "glimm" | "viscous", "t_end": 1.0, "params": {...}},
      "diagnostics": {"glimm_functional": true, "tv_bound": 10.0, "mass_tol": 1e-10,
                      "max_principle": true, "snapshot_points": 201, "window": [a, b]},
      "output_dir": "out",
      "seed": 0
    }

Solver parameters are the fields of ``TrackingParams``, ``GlimmParams``
(``dx``, ``dt``, ``sampler``, ``store_every``, plus ``x_range``) or
``ViscousParams`` (``epsilon``, ``x_span``, ``dx``, ``dt``, ``scheme``,
``form``, ``store_every``).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Dict, Optional

import numpy as np

from .diagnostics import TOL_GLIMM_FUNCTIONAL, calibrate_C0
from .errors import ConfigInvalid, ConsLawError, NotFound
from .experiments import list_presets
from .front_tracking import TrackingParams, discretize_initial, evolve, write_events_csv, write_fronts_csv, write_snapshot_csv
from .glimm import GlimmParams, glimm_solve
from .hyperbolic_system import get_model
from .viscous import ViscousParams, parabolic_solve

log = logging.getLogger("conslaw")

SOLVERS = ("front_tracking", "glimm", "viscous")
INITIAL_TYPES = ("riemann", "step-train", "smooth-bump")


@dataclass
class ExperimentConfig:
    model: dict
    initial: dict
    solver: dict
    diagnostics: dict = field(default_factory=dict)
    output_dir: str = "out"
    seed: int = 0

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigInvalid("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigInvalid(f"unknown config keys: {sorted(extra)}")
        for key in ("model", "initial", "solver"):
            if key not in d:
                raise ConfigInvalid(f"missing required key {key!r}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path}: {exc}") from exc
        return cls.from_dict(d)

    def validate(self) -> None:
        if "name" not in self.model:
            raise ConfigInvalid("model.name is required")
        kind = self.initial.get("type")
        if kind not in INITIAL_TYPES:
            raise ConfigInvalid(f"initial.type must be one of {INITIAL_TYPES}")
        if self.solver.get("name") not in SOLVERS:
            raise ConfigInvalid(f"solver.name must be one of {SOLVERS}")
        t_end = self.solver.get("t_end")
        if not isinstance(t_end, (int, float)) or t_end <= 0:
            raise ConfigInvalid("solver.t_end must be a positive number")
        if kind == "riemann" and not {"left", "right"} <= set(self.initial):
            raise ConfigInvalid("riemann data needs left and right states")
        if kind == "step-train":
            b, s = self.initial.get("breakpoints"), self.initial.get("states")
            if b is None or s is None or len(s) != len(b) + 1:
                raise ConfigInvalid("step-train needs len(states) == len(breakpoints) + 1")
        if kind == "smooth-bump" and not {"base", "amplitude", "positions", "x_range", "mesh"} <= set(self.initial):
            raise ConfigInvalid("smooth-bump needs base, amplitude, positions, x_range and mesh")


# ------------------------------------------------------------ initial data


def build_initial(spec: dict, n: int):
    """Return ``(u_bar callable, piecewise description or None, x_range)``."""
    kind = spec["type"]
    if kind in ("riemann", "step-train"):
        if kind == "riemann":
            breaks = [float(spec.get("x0", 0.0))]
            states = [spec["left"], spec["right"]]
        else:
            breaks, states = [float(x) for x in spec["breakpoints"]], spec["states"]
        states = [np.atleast_1d(np.asarray(s, dtype=float)) for s in states]
        if any(s.size != n for s in states):
            raise ConfigInvalid(f"states must have {n} components")

        def u_bar(x):
            return states[int(np.searchsorted(breaks, x, side="right"))]

        pad = 1.0 + (breaks[-1] - breaks[0])
        return u_bar, (breaks, states), spec.get("x_range", [breaks[0] - pad, breaks[-1] + pad])
    base = np.atleast_1d(np.asarray(spec["base"], dtype=float))
    amp = np.atleast_1d(np.asarray(spec["amplitude"], dtype=float)) * np.ones(n)
    pos = [float(p) for p in spec["positions"]]
    width = float(spec.get("width", 0.2))

    def u_bar(x):
        return base + amp * sum(math.exp(-(((x - p) / width) ** 2)) for p in pos)

    return u_bar, None, spec["x_range"]


# ---------------------------------------------------------------- runners


def _ft_run(model, cfg: ExperimentConfig, out: Path, u_bar, piecewise, x_range) -> dict:
    sp = dict(cfg.solver.get("params", {}))
    diag = cfg.diagnostics
    params = TrackingParams(**{k: v for k, v in sp.items() if k in {f.name for f in fields(TrackingParams)}})
    data = piecewise if piecewise is not None else u_bar
    init = discretize_initial(
        model, data, float(cfg.initial.get("mesh", 0.05)), float(sp.get("tv_budget", math.inf)), params.eps_fan, x_range
    )
    res = evolve(model, init, float(cfg.solver["t_end"]), params)
    write_fronts_csv(res.state, out / "fronts.csv")
    write_events_csv(res.events, out / "events.csv")
    res.trace.write_csv(out / "trace.csv")
    window = diag.get("window", x_range)
    xs = np.linspace(window[0], window[1], int(diag.get("snapshot_points", 201)))
    write_snapshot_csv(res.state, out / "snapshot.csv", xs)
    measured = {"fronts": len(res.state.fronts), "events": len(res.events)}
    checks = {"front_count_bounded": len(res.state.fronts) <= params.max_fronts}
    if diag.get("glimm_functional", True) and res.events:
        C0 = calibrate_C0(model, [res.events])
        measured["C0"] = C0
        checks["glimm_functional"] = all(e.delta_V + C0 * e.delta_Q <= TOL_GLIMM_FUNCTIONAL for e in res.events)
    return {"measured": measured, "checks": checks}


def _glimm_run(model, cfg: ExperimentConfig, out: Path, u_bar, piecewise, x_range) -> dict:
    sp = dict(cfg.solver.get("params", {}))
    xr = sp.pop("x_range", x_range)
    sp.setdefault("seed", cfg.seed)
    params = GlimmParams(t_end=float(cfg.solver["t_end"]), **sp)
    sol = glimm_solve(model, u_bar, xr, params)
    sol.write_csv(out / "solution.csv")
    tv0 = sol.total_variation(0)
    ratio = max(sol.total_variation(k) for k in range(len(sol.times))) / tv0 if tv0 > 0 else 0.0
    measured = {"tv_ratio": ratio, "steps": int(round(params.t_end / params.dt))}
    checks = {}
    if "tv_bound" in cfg.diagnostics:
        checks["tv_bound"] = ratio <= float(cfg.diagnostics["tv_bound"])
    return {"measured": measured, "checks": checks}


def _viscous_run(model, cfg: ExperimentConfig, out: Path, u_bar, piecewise, x_range) -> dict:
    sp = dict(cfg.solver.get("params", {}))
    sp.setdefault("x_span", x_range)
    sp["x_span"] = tuple(sp["x_span"])
    params = ViscousParams(t_end=float(cfg.solver["t_end"]), **sp)
    sol = parabolic_solve(model, u_bar, params)
    sol.write_csv(out / "solution.csv")
    measured = {"dt": sol.meta["dt"], "rescaled": sol.meta["rescaled"]}
    checks = {}
    if sol.meta["conservative"]:
        defect = float(np.max(np.abs(sol.meta["mass_defect"])))
        measured["mass_defect"] = defect
        checks["mass_balance"] = defect <= float(cfg.diagnostics.get("mass_tol", 1e-10)) * max(1.0, params.t_end)
    if model.n == 1 and cfg.diagnostics.get("max_principle", True):
        lo, hi = float(sol.values[0].min()), float(sol.values[0].max())
        checks["max_principle"] = all(v.min() >= lo - 1e-12 and v.max() <= hi + 1e-12 for v in sol.values)
    return {"measured": measured, "checks": checks}


RUNNERS: Dict[str, Callable] = {"front_tracking": _ft_run, "glimm": _glimm_run, "viscous": _viscous_run}


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _write_summary(out: Path, summary: dict) -> None:
    manifest = {}
    for p in sorted(out.glob("*.csv")):
        with open(p) as fh:
            manifest[p.name] = fh.readline().strip().split(",")
    summary = dict(summary, manifest=manifest)
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def run_experiment(cfg: ExperimentConfig, out_dir: Optional[Path] = None) -> dict:
    """Run one configured experiment; writes CSVs and ``summary.json``."""
    out = Path(out_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        model = get_model(cfg.model["name"], **cfg.model.get("params", {}))
    except TypeError as exc:
        raise ConfigInvalid(f"bad model parameters: {exc}") from exc
    u_bar, piecewise, x_range = build_initial(cfg.initial, model.n)
    name = cfg.solver["name"]
    try:
        result = RUNNERS[name](model, cfg, out, u_bar, piecewise, list(x_range))
    except TypeError as exc:
        raise ConfigInvalid(f"bad solver parameters: {exc}") from exc
    except ConsLawError as exc:
        raise type(exc)(f"[{model.name}/{name}] {exc}") from exc
    summary = {
        "config": asdict(cfg),
        "measured": result["measured"],
        "checks": result["checks"],
        "passed": all(result["checks"].values()),
    }
    _write_summary(out, summary)
    return summary


def run_preset(name: str, out_dir: Path, seed: int = 0) -> dict:
    preset = list_presets(name)[0]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = preset.run(seed, out)
    log.info(res.line())
    summary = {"preset": name, "seed": seed, **res.summary()}
    _write_summary(out, summary)
    return summary


# --------------------------------------------------------------------- main


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="conslaw", description="Hyperbolic conservation law experiments")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a JSON experiment config")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="override output_dir")
    p = sub.add_parser("preset", help="run a named verification experiment")
    p.add_argument("name")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)
    lp = sub.add_parser("list-presets", help="list available presets")
    lp.add_argument("name", nargs="?", default=None)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    try:
        if args.cmd == "list-presets":
            for pr in list_presets(args.name):
                print(f"{pr.name:24s} {pr.description}")
            return 0
        if args.cmd == "run":
            summary = run_experiment(ExperimentConfig.load(args.config), args.out)
            for k, v in summary["checks"].items():
                print(f"{'PASS' if v else 'FAIL'} {k}")
        else:
            out = Path(args.out or f"out/{args.name}")
            summary = run_preset(args.name, out, args.seed)
            print(f"{'PASS' if summary['passed'] else 'FAIL'} {args.name}: {summary['detail']}")
    except (ConfigInvalid, NotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsLawError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if summary["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
