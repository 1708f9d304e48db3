"""Command-line front end.

Subcommands: ness, sweep, fig, check-symmetry, uniqueness, psr.
Exit codes: 0 success, 2 solver failure (non-convergence, degenerate steady
state), 3 configuration error (bad JSON, bad flags, invalid model).
"""

from __future__ import annotations

import argparse
import json
import sys

from .liouvillian import (
    DegenerateSteadyStateError,
    SolveOptions,
    check_uniqueness,
    solve_ness_evolution,
    solve_ness_nullspace,
)
from .model import build_model
from .observables import default_selections, parse_selections, psr_audit
from .sweeps import (
    fig_dataset,
    run_sweep,
    sweep_config_from_dict,
    write_sweep_csv,
    write_table,
)
from .symmetry import UniquenessNotEstablished, liouvillian_commutes, make_transform


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; we reserve 2 for solver failures
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="nessforge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ness = sub.add_parser("ness", parents=[], help="solve one steady state")
    ness.add_argument("--config", required=True)
    ness.add_argument("--method", choices=["nullspace", "evolve"], default="nullspace")
    ness.add_argument("--tol", type=float, default=1e-10)
    ness.add_argument("--out", required=True)

    sweep = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--workers", type=int, default=1)

    fig = sub.add_parser("fig", help="emit the dataset behind one of the figures")
    fig.add_argument("--id", type=int, choices=[1, 2, 3], required=True)
    fig.add_argument("--set", action="append", default=[], metavar="KEY=VAL")
    fig.add_argument("--out", required=True)
    fig.add_argument("--workers", type=int, default=1)

    sym = sub.add_parser("check-symmetry", help="test Liouvillian invariance")
    sym.add_argument("--config", required=True)
    sym.add_argument("--transform", required=True)
    sym.add_argument("--tol", type=float, default=1e-10)

    uniq = sub.add_parser("uniqueness", help="operator-algebra completeness check")
    uniq.add_argument("--config", required=True)

    psr = sub.add_parser("psr", help="parity-selection-rule audit of the steady state")
    psr.add_argument("--config", required=True)
    psr.add_argument("--method", choices=["nullspace", "evolve"], default="nullspace")
    psr.add_argument("--tol", type=float, default=1e-9)

    return p


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _parse_overrides(pairs):
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--set expects KEY=VAL, got {pair!r}")
        key, val = pair.split("=", 1)
        try:
            num = float(val)
            out[key] = int(num) if num == int(num) and "." not in val and "e" not in val.lower() else num
        except ValueError:
            out[key] = val
    return out


def _cmd_ness(args) -> int:
    config = _load_json(args.config)
    model = build_model(config)
    opts = SolveOptions(method=args.method, tol=args.tol)
    if args.method == "nullspace":
        rho, info = solve_ness_nullspace(model, opts, return_info=True)
    else:
        rho, info = solve_ness_evolution(model, opts=opts, return_info=True)
    sels = config.get("observables") or default_selections(model.n_sites, model.delta)
    cols = parse_selections(sels, model.n_sites, model.delta)
    names = [name for name, _ in cols] + ["residual", "converged"]
    row = [float(fn(rho)) for _, fn in cols] + [info.residual,
                                                1 if info.converged else 0]
    from dataclasses import asdict

    write_table(args.out, names, [row],
                sidecar={"config": config, "diagnostics": [asdict(info)]})
    print(f"wrote {args.out} (residual {info.residual:.3e})")
    return 0 if info.converged else 2


def _cmd_sweep(args) -> int:
    cfg = sweep_config_from_dict(_load_json(args.config))
    result = run_sweep(cfg, workers=args.workers)
    write_sweep_csv(result, args.out)
    bad = sum(1 for d in result.diagnostics if not d["converged"])
    print(f"wrote {args.out} ({len(result.rows)} points, {bad} unconverged)")
    return 0 if bad == 0 else 2


def _cmd_fig(args) -> int:
    overrides = _parse_overrides(args.set)
    result = fig_dataset(args.id, overrides, workers=args.workers)
    write_sweep_csv(result, args.out)
    print(f"wrote {args.out} ({len(result.rows)} points)")
    return 0


def _cmd_check_symmetry(args) -> int:
    model = build_model(_load_json(args.config))
    T = make_transform(args.transform, model.n_sites)
    rep = liouvillian_commutes(model, T, tol=args.tol)
    verdict = "invariant" if rep.invariant else "not-invariant"
    print(f"{args.transform} {verdict} residual={rep.residual:.6e}")
    return 0


def _cmd_uniqueness(args) -> int:
    model = build_model(_load_json(args.config))
    rep = check_uniqueness(model)
    word = "complete" if rep.complete else "incomplete"
    print(f"{word} algebra_dim={rep.algebra_dim} full_dim={rep.full_dim}")
    return 0


def _cmd_psr(args) -> int:
    model = build_model(_load_json(args.config))
    opts = SolveOptions(method=args.method)
    if args.method == "nullspace":
        rho = solve_ness_nullspace(model, opts)
    else:
        rho = solve_ness_evolution(model, opts=opts)
    report = psr_audit(rho, tol=args.tol)
    zmin = int(report.zeros_per_row.min())
    zmax = int(report.zeros_per_row.max())
    xs_ok = all(report.xstate_pass.values()) if report.xstate_pass else True
    print(
        f"max_violation={report.max_violation:.6e} "
        f"zeros_per_row={zmin}..{zmax} xstates={'pass' if xs_ok else 'FAIL'} "
        f"violations={len(report.violating_indices)}"
    )
    return 0


_COMMANDS = {
    "ness": _cmd_ness,
    "sweep": _cmd_sweep,
    "fig": _cmd_fig,
    "check-symmetry": _cmd_check_symmetry,
    "uniqueness": _cmd_uniqueness,
    "psr": _cmd_psr,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        return _COMMANDS[args.command](args)
    except (DegenerateSteadyStateError, UniquenessNotEstablished) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
