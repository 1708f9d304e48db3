"""Parameter sweeps over model configs, figure datasets, and CSV output.

Each sweep point is an independent solve; points can run in a process pool
and the output is byte-identical regardless of worker count.  CSV numbers
use 17 significant digits; a sidecar JSON (same path + ".json") records the
full config and per-row solver diagnostics.  No timestamps anywhere.
"""

from __future__ import annotations

import copy
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .liouvillian import (
    DegenerateSteadyStateError,
    SolveOptions,
    check_uniqueness,
    solve_ness_evolution,
    solve_ness_nullspace,
)
from .model import build_model, twist_targets
from .observables import parse_selections


@dataclass(frozen=True)
class SweepConfig:
    model: dict  # canonical model config (JSON shape)
    param: str  # dotted path, e.g. "preset.params.nu"
    start: float
    stop: float
    steps: int
    observables: list
    solver: SolveOptions = field(default_factory=SolveOptions)
    param_label: str | None = None  # header for the first CSV column

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("sweep needs at least 2 steps")
        if self.start == self.stop:
            raise ValueError("degenerate sweep: from equals to")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class SweepResult:
    param_name: str
    param_values: list
    columns: list  # observable column names, then residual, converged
    rows: list  # one list of floats per point (excluding the param value)
    diagnostics: list  # one dict per point
    config: dict


def set_by_path(config: dict, path: str, value):
    """Assign into a nested dict/list structure along a dotted path."""
    node = config
    parts = path.split(".")
    for key in parts[:-1]:
        node = node[int(key)] if isinstance(node, list) else node[key]
    last = parts[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value
    return config


def _solve_point(payload):
    """Worker body: build the model at one parameter value and measure.

    Takes and returns plain picklable data so it can cross process borders.
    """
    cfg = copy.deepcopy(payload["model"])
    set_by_path(cfg, payload["param"], payload["value"])
    model = build_model(cfg)
    opts = SolveOptions(**payload["solver"])
    if opts.method == "nullspace":
        rho, info = solve_ness_nullspace(model, opts, return_info=True)
    else:
        rho, info = solve_ness_evolution(model, opts=opts, return_info=True)
    cols = parse_selections(payload["observables"], model.n_sites, model.delta)
    values = [float(fn(rho)) for _, fn in cols]
    return {
        "value": payload["value"],
        "values": values,
        "residual": info.residual,
        "converged": bool(info.converged),
        "info": asdict(info),
    }


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepResult:
    """Solve every sweep point; uniqueness is certified at ends and midpoint."""
    values = cfg.values()
    probe = [values[0], values[len(values) // 2], values[-1]]
    for v in probe:
        test_cfg = set_by_path(copy.deepcopy(cfg.model), cfg.param, float(v))
        report = check_uniqueness(build_model(test_cfg))
        if not report.complete:
            raise DegenerateSteadyStateError(
                f"sweep aborted: algebra incomplete at {cfg.param}={v} "
                f"(dim {report.algebra_dim} of {report.full_dim})"
            )
    # column names come from a probe model; workers rebuild their own
    probe_model = build_model(set_by_path(copy.deepcopy(cfg.model), cfg.param,
                                          float(values[0])))
    columns = [name for name, _ in parse_selections(cfg.observables,
                                                    probe_model.n_sites,
                                                    probe_model.delta)]
    payloads = [
        {
            "model": cfg.model,
            "param": cfg.param,
            "value": float(v),
            "observables": list(cfg.observables),
            "solver": asdict(cfg.solver),
        }
        for v in values
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_solve_point, payloads))
    else:
        outcomes = [_solve_point(p) for p in payloads]
    rows = [o["values"] + [o["residual"], 1 if o["converged"] else 0]
            for o in outcomes]
    return SweepResult(
        param_name=cfg.param_label or cfg.param,
        param_values=[o["value"] for o in outcomes],
        columns=columns + ["residual", "converged"],
        rows=rows,
        diagnostics=[o["info"] for o in outcomes],
        config=_config_payload(cfg),
    )


def _config_payload(cfg: SweepConfig) -> dict:
    return {
        "model": copy.deepcopy(cfg.model),
        "sweep": {"param": cfg.param, "from": cfg.start, "to": cfg.stop,
                  "steps": cfg.steps},
        "observables": list(cfg.observables),
        "solver": asdict(cfg.solver),
    }


def sweep_config_from_dict(raw: dict) -> SweepConfig:
    """Parse the JSON sweep document the CLI consumes."""
    try:
        sw = raw["sweep"]
        cfg = SweepConfig(
            model=raw["model"],
            param=sw["param"],
            start=float(sw["from"]),
            stop=float(sw["to"]),
            steps=int(sw.get("steps", 51)),
            observables=list(raw["observables"]),
            solver=SolveOptions(**raw.get("solver", {})),
            param_label=sw.get("label"),
        )
    except KeyError as exc:
        raise ValueError(f"sweep config missing key {exc}") from None
    return cfg


# ---------------------------------------------------------------------------
# CSV


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def write_table(path: str, columns, rows, sidecar: dict | None = None):
    """Plain CSV: comma separator, '.' decimal, header row, no timestamps."""
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    if sidecar is not None:
        with open(path + ".json", "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")


def write_sweep_csv(result: SweepResult, path: str):
    columns = [result.param_name] + result.columns
    rows = [[v] + row for v, row in zip(result.param_values, result.rows)]
    sidecar = {
        "config": result.config,
        "columns": columns,
        "diagnostics": result.diagnostics,
    }
    write_table(path, columns, rows, sidecar)


# ---------------------------------------------------------------------------
# figure datasets


def fig_dataset(fig_id: int, overrides: dict | None = None,
                workers: int = 1) -> SweepResult:
    """Canonical sweep behind each figure.

    1: one-sided driving with a symmetry-breaking probe, sweep nu.
    2: twisted boundary targets vs actual boundary magnetizations.
    3: spin/energy current switching plus boundary gradients.
    Overrides may adjust preset params (N, delta, Gamma, A, J_Z) and the
    sweep controls (from, to, steps) and solver (method, tol).
    """
    ov = dict(overrides or {})
    sweep_keys = {"from": 0.0, "to": 1.0, "steps": 51}
    for k in list(ov):
        if k in sweep_keys:
            sweep_keys[k] = ov.pop(k)
    solver = SolveOptions(method=str(ov.pop("method", "nullspace")),
                          tol=float(ov.pop("tol", 1e-10)))
    if fig_id == 1:
        params = {"N": 4, "J_Z": -1.3, "nu": 0.0}
        params.update(ov)
        N = int(params["N"])
        obs = [f"sx:{n}" for n in range(1, N + 1)]
        obs += [f"sy:{n}" for n in range(1, N + 1)]
        obs += [f"jy:{n}" for n in range(1, N)]
        cfg = SweepConfig(
            model={"preset": {"name": "fig1_nu", "params": params}},
            param="preset.params.nu",
            start=float(sweep_keys["from"]),
            stop=float(sweep_keys["to"]),
            steps=int(sweep_keys["steps"]),
            observables=obs,
            solver=solver,
            param_label="nu",
        )
        return run_sweep(cfg, workers=workers)
    if fig_id in (2, 3):
        params = {"N": 5, "delta": 1.0, "Gamma": 0.5, "A": 2.0, "alpha_bath": 0.0}
        params.update(ov)
        N = int(params["N"])
        if fig_id == 2:
            obs = ["sx:1", "sy:1", f"sx:{N}", f"sy:{N}"]
        else:
            mid_bond = N // 2
            mid_site = min(max(2, (N + 1) // 2), N - 1)
            obs = [f"jz:{mid_bond}-{mid_bond + 1}", f"je:{mid_site}",
                   "grad:x", "grad:y", "grad:z"]
        cfg = SweepConfig(
            model={"preset": {"name": "twist_alpha", "params": params}},
            param="preset.params.alpha_bath",
            start=float(sweep_keys["from"]),
            stop=float(sweep_keys["to"]),
            steps=int(sweep_keys["steps"]),
            observables=obs,
            solver=solver,
            param_label="alpha_bath",
        )
        result = run_sweep(cfg, workers=workers)
        if fig_id == 2:
            _append_target_columns(result, float(params["A"]))
        return result
    raise ValueError(f"unknown figure id {fig_id!r}")


def _append_target_columns(result: SweepResult, A: float):
    """Closed-form targeted boundary values, merged next to the measured ones."""
    extra = ["target_left_x", "target_left_y", "target_right_x", "target_right_y"]
    # keep residual/converged at the end
    head = result.columns[:-2]
    tail = result.columns[-2:]
    result.columns = head + extra + tail
    for i, a in enumerate(result.param_values):
        t = twist_targets(A, a)
        vals = [t["left"][0], t["left"][1], t["right"][0], t["right"][1]]
        result.rows[i] = result.rows[i][:-2] + vals + result.rows[i][-2:]
