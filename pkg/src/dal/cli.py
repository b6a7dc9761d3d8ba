"""Command-line front end.

Every command reads a JSON config (``--config``) or a shipped preset
(``--preset``), writes its result to ``--out`` and a run manifest to
``<out>.manifest.json``.  A manifest is itself a valid config.

Exit codes: 0 success, 1 computation error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import fidelity_trajectory, initial_state, linear_times, log_times
from .entanglement import negativity, optimal_two_qubit_coupling, two_qubit_analytic
from .errors import ConfigError, DalError
from .explore import Bounds, find_crossover, maximize_entanglement, scan_gamma_c, sweep_2d
from .model import ModelParams
from .quantum import partial_trace_C
from .spectral import fidelities, hamiltonian_spectrum
from .steady import steady_state

log = logging.getLogger("dal")

COMMANDS = ("steady", "sweep", "scan", "dynamics", "optimize", "analytic2q")
MANIFEST_KEYS = {"command", "config", "version", "wall_time_s", "failures", "summary", "outputs"}


# -- config normalisation ---------------------------------------------------

def _check_keys(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a JSON object")
    extra = set(d) - set(allowed)
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")


def _num(d, key, default, where, kind=float):
    v = d.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    if kind is int and v != int(v):
        raise ConfigError(f"{where}.{key} must be an integer")
    return kind(v)


def _pair(d, key, default, where):
    v = d.get(key, default)
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ConfigError(f"{where}.{key} must be [lo, hi]")
    return [float(v[0]), float(v[1])]


def _params(d) -> dict:
    return ModelParams.from_dict(d.get("params", {})).to_dict()


def _norm_steady(c):
    _check_keys(c, {"params"}, "config")
    return {"params": _params(c)}


def _norm_analytic(c):
    _check_keys(c, {"j", "gamma"}, "config")
    out = {"j": _num(c, "j", 0.62, "config"), "gamma": _num(c, "gamma", 1e-3, "config")}
    if out["gamma"] < 0:
        raise ConfigError("gamma must be non-negative")
    return out


def _norm_sweep(c):
    _check_keys(c, {"params", "omega_c", "j_c", "resolution"}, "config")
    res = c.get("resolution", [201, 201])
    if isinstance(res, int) and not isinstance(res, bool):
        res = [res, res]
    if not (isinstance(res, list) and len(res) == 2 and all(isinstance(r, int) and r >= 2 for r in res)):
        raise ConfigError("config.resolution must be an integer >= 2 or a pair of them")
    return {"params": _params(c), "omega_c": _pair(c, "omega_c", [-1.0, 1.0], "config"),
            "j_c": _pair(c, "j_c", [0.0, 1.0], "config"), "resolution": res}


def _norm_grid(g, where):
    _check_keys(g, {"start", "stop", "num", "spacing"}, where)
    spacing = g.get("spacing", "log")
    if spacing not in ("log", "linear"):
        raise ConfigError(f"{where}.spacing must be 'log' or 'linear'")
    out = {"start": _num(g, "start", 1e-3, where), "stop": _num(g, "stop", 1.0, where),
           "num": _num(g, "num", 200, where, int), "spacing": spacing}
    if not 0 < out["start"] < out["stop"] or out["num"] < 2:
        raise ConfigError(f"{where} needs 0 < start < stop and num >= 2")
    return out


def _norm_scan(c):
    _check_keys(c, {"params", "gamma_c", "crossover"}, "config")
    out = {"params": _params(c), "gamma_c": _norm_grid(c.get("gamma_c", {}), "config.gamma_c"),
           "crossover": None}
    cross = c.get("crossover")
    if cross is not None:
        _check_keys(cross, {"reference", "bracket"}, "config.crossover")
        out["crossover"] = {"reference": _num(cross, "reference", 0.155, "config.crossover"),
                            "bracket": _pair(cross, "bracket", [0.3, 0.9], "config.crossover")}
    return out


def _norm_dynamics(c):
    _check_keys(c, {"params", "initial", "times"}, "config")
    init = c.get("initial", "egg")
    if init != "egg":
        try:
            shape = np.asarray(init, dtype=float).shape
        except (TypeError, ValueError):
            shape = None
        if shape != (8, 8, 2):
            raise ConfigError("config.initial must be 'egg' or an 8x8 matrix of [re, im] pairs")
    t = c.get("times", {})
    _check_keys(t, {"spacing", "t_min", "t_max", "num", "dt_out"}, "config.times")
    spacing = t.get("spacing", "log")
    if spacing == "log":
        _check_keys(t, {"spacing", "t_min", "t_max", "num"}, "config.times")
        times = {"spacing": "log", "t_min": _num(t, "t_min", 0.1, "config.times"),
                 "t_max": _num(t, "t_max", 2e4, "config.times"),
                 "num": _num(t, "num", 400, "config.times", int)}
    elif spacing == "linear":
        _check_keys(t, {"spacing", "t_max", "dt_out"}, "config.times")
        times = {"spacing": "linear", "t_max": _num(t, "t_max", 100.0, "config.times"),
                 "dt_out": _num(t, "dt_out", 1.0, "config.times")}
    else:
        raise ConfigError("config.times.spacing must be 'log' or 'linear'")
    return {"params": _params(c), "initial": init, "times": times}


def _norm_optimize(c):
    _check_keys(c, {"bounds", "n_starts", "n_screen", "seed"}, "config")
    out = {"bounds": Bounds.from_dict(c.get("bounds", {})).to_dict(),
           "n_starts": _num(c, "n_starts", 32, "config", int),
           "n_screen": _num(c, "n_screen", 4096, "config", int),
           "seed": _num(c, "seed", 0, "config", int)}
    if out["n_starts"] < 1 or out["n_screen"] < 0:
        raise ConfigError("n_starts must be >= 1 and n_screen >= 0")
    return out


NORMALIZERS = {"steady": _norm_steady, "analytic2q": _norm_analytic, "sweep": _norm_sweep,
               "scan": _norm_scan, "dynamics": _norm_dynamics, "optimize": _norm_optimize}


def preset_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("dal.presets").iterdir() if p.name.endswith(".json"))


def _load_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {where}: {exc}") from exc


def load_config(command: str, config_path: str | None, preset: str | None) -> dict:
    if config_path and preset:
        raise ConfigError("use either --config or --preset, not both")
    if preset:
        if preset not in preset_names():
            raise ConfigError(f"unknown preset {preset!r}; available: {', '.join(preset_names())}")
        raw = _load_json(resources.files("dal.presets").joinpath(f"{preset}.json").read_text(), preset)
    elif config_path:
        try:
            text = Path(config_path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        raw = _load_json(text, config_path)
    else:
        raw = {}
    if isinstance(raw, dict) and "config" in raw:
        # preset or manifest wrapper
        _check_keys(raw, MANIFEST_KEYS, "wrapper")
        if raw.get("command", command) != command:
            raise ConfigError(f"config is for command {raw['command']!r}, not {command!r}")
        raw = raw["config"]
    return NORMALIZERS[command](raw)


# -- commands ---------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def run_steady(cfg, out: Path, jobs: int):
    p = ModelParams.from_dict(cfg["params"])
    res = steady_state(p)
    spec = hamiltonian_spectrum(p)
    payload = {
        "params": p.to_dict(),
        "negativity": negativity(partial_trace_C(res.rho_st)),
        "residual": res.residual,
        "gap": res.nullspace_gap,
        "min_eigenvalue": res.min_eigenvalue,
        "fidelities": [float(f) for f in fidelities(res.rho_st, spec)],
        "eigenenergies": [float(e) for e in spec.energies],
    }
    out.write_text(_dump(payload))
    return [], {"negativity": payload["negativity"]}


def run_analytic(cfg, out: Path, jobs: int):
    j_star, n_star = optimal_two_qubit_coupling(cfg["gamma"])
    payload = {"j": cfg["j"], "gamma": cfg["gamma"],
               "negativity": two_qubit_analytic(cfg["j"], cfg["gamma"]),
               "j_star": j_star, "n_star": n_star}
    out.write_text(_dump(payload))
    return [], payload


def run_sweep(cfg, out: Path, jobs: int):
    grid = sweep_2d(ModelParams.from_dict(cfg["params"]), tuple(cfg["omega_c"]), tuple(cfg["j_c"]),
                    tuple(cfg["resolution"]), jobs=jobs)
    grid.write_csv(out)
    wc, jc, n = grid.argmax()
    return grid.failures, {"max": {"omega_c": wc, "j_c": jc, "negativity": n}}


def _gamma_points(g):
    if g["spacing"] == "log":
        return np.geomspace(g["start"], g["stop"], g["num"])
    return np.linspace(g["start"], g["stop"], g["num"])


def run_scan(cfg, out: Path, jobs: int):
    template = ModelParams.from_dict(cfg["params"])
    scan = scan_gamma_c(template, _gamma_points(cfg["gamma_c"]), jobs=jobs)
    scan.write_csv(out)
    g, n = scan.peak()
    summary = {"peak": {"gamma_c": g, "negativity": n}}
    if cfg["crossover"]:
        c = cfg["crossover"]
        summary["crossover"] = find_crossover(template, tuple(c["bracket"]), c["reference"])
    return scan.failures, summary


def _initial(spec):
    if spec == "egg":
        return initial_state()
    arr = np.asarray(spec, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def run_dynamics(cfg, out: Path, jobs: int):
    t = cfg["times"]
    times = (log_times(t["t_min"], t["t_max"], t["num"]) if t["spacing"] == "log"
             else linear_times(t["t_max"], t["dt_out"]))
    traj = fidelity_trajectory(ModelParams.from_dict(cfg["params"]), _initial(cfg["initial"]), times)
    traj.write_csv(out)
    final = traj.fidelity_rows[-1]
    return [], {"final_fidelities": [float(f) for f in final], "final_argmax": int(np.argmax(final))}


def run_optimize(cfg, out: Path, jobs: int):
    res = maximize_entanglement(Bounds.from_dict(cfg["bounds"]), n_starts=cfg["n_starts"],
                                seed=cfg["seed"], n_screen=cfg["n_screen"], jobs=jobs)
    res.write_json(out)
    return [], {"best_n": res.best_n, "best_params": res.best_params.to_dict(),
                "failed_evaluations": res.failed_evaluations}


RUNNERS = {"steady": run_steady, "analytic2q": run_analytic, "sweep": run_sweep,
           "scan": run_scan, "dynamics": run_dynamics, "optimize": run_optimize}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dal", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config or a previous run manifest")
        sp.add_argument("--preset", help="shipped preset: " + ", ".join(preset_names()))
        sp.add_argument("--out", required=True, help="result file (CSV or JSON)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps/optimisation")
        sp.add_argument("--seed", type=int, help="override the optimiser seed")
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("DAL_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        cfg = load_config(args.command, args.config, args.preset)
        if args.seed is not None:
            if args.command != "optimize":
                raise ConfigError("--seed only applies to optimize")
            cfg["seed"] = args.seed
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
    except ConfigError as exc:
        print(f"dal: config error: {exc}", file=sys.stderr)
        return 2

    start = time.perf_counter()
    try:
        failures, summary = RUNNERS[args.command](cfg, out, args.jobs)
    except DalError as exc:
        print(f"dal: {args.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    manifest = {"command": args.command, "config": cfg, "version": __version__,
                "wall_time_s": time.perf_counter() - start, "failures": failures,
                "summary": summary, "outputs": [out.name]}
    Path(f"{out}.manifest.json").write_text(_dump(manifest))
    log.info("wrote %s", out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
