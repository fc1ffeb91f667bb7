"""Command-line front end.

Subcommands: gen-scenario, optimize, simulate-consensus, sweep, select,
oracle-gap.  Single runs print JSON; experiments emit CSV.  Any failure
prints a machine-readable error JSON on stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .diffusion import centralized_model, decentralized_model
from .errors import InvalidConfig, WsnGainError
from .estimator import GainVector, received_by_sink, run_consensus, simulate_measurement
from .gainopt import ConstraintSpec, OptimizerConfig, optimize, optimize_decentralized, optimize_phase_only_uqp
from .harness import ExperimentConfig, columns_for, render_csv, run_experiment
from .netgraph import random_connected_topology
from .scenario import (
    CentralizedScenario,
    NoiseConfig,
    gen_centralized_scenario,
    gen_decentralized_scenario,
    load_scenario,
    save_scenario,
    to_json_dict,
)

_OPT_FIELDS = {f.name for f in dataclasses.fields(OptimizerConfig)}
_NOISE_FIELDS = {f.name for f in dataclasses.fields(NoiseConfig)}
_EXP_FIELDS = {f.name for f in dataclasses.fields(ExperimentConfig)}


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise InvalidConfig("config file must hold a JSON object")
    return doc


def _split_config(doc: dict):
    """Route config keys to the optimizer, noise and experiment layers."""
    opt = {k: v for k, v in doc.items() if k in _OPT_FIELDS}
    noise = {k: v for k, v in doc.items() if k in _NOISE_FIELDS}
    exp = {k: v for k, v in doc.items() if k in _EXP_FIELDS and k not in ("optimizer", "noise", "constraint")}
    known = _OPT_FIELDS | _NOISE_FIELDS | set(exp)
    unknown = [k for k in doc if k not in known]
    if unknown:
        raise InvalidConfig(f"unknown config keys: {', '.join(sorted(unknown))}")
    for k in ("d_range", "v_range"):
        if k in noise:
            noise[k] = tuple(noise[k])
    for k in ("n_values", "sigma_grid"):
        if k in exp:
            exp[k] = tuple(exp[k])
    return opt, noise, exp


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _write_text(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _result_json(gains: GainVector, trace, plan=None) -> dict:
    doc = {
        "gains": [[float(np.real(z)), float(np.imag(z))] for z in gains.values],
        "constraint": gains.constraint.label() if gains.constraint else None,
        "variance": trace.final_variance,
        "eta_trace": list(trace.eta_per_outer),
        "outer_iters": trace.outer_iters,
        "inner_iters_total": trace.inner_iters_total,
        "wall_time_s": trace.wall_time_s,
    }
    if plan is not None:
        doc["plan"] = plan.to_json_dict()
    return doc


def _cmd_gen_scenario(args) -> int:
    _, noise_kw, _ = _split_config(_load_config(args.config))
    noise = NoiseConfig(**noise_kw)
    theta = complex(args.theta)
    if args.kind == "centralized":
        scen = gen_centralized_scenario(args.n, args.m, noise, theta, seed=args.seed)
    else:
        topo = random_connected_topology(args.n, args.edge_prob, args.seed)
        scen = gen_decentralized_scenario(topo, noise, theta, seed=args.seed)
    if args.out:
        save_scenario(scen, args.out)
    else:
        json.dump(to_json_dict(scen), sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _cmd_optimize(args) -> int:
    opt_kw, noise_kw, _ = _split_config(_load_config(args.config))
    opt_cfg = OptimizerConfig(**{"seed": args.seed, **opt_kw})
    constraint = ConstraintSpec.parse(args.constraint)
    plan = None
    if args.scenario:
        scen = load_scenario(args.scenario)
    else:
        scen = gen_centralized_scenario(args.n, args.m, NoiseConfig(**noise_kw), seed=args.seed)
    if isinstance(scen, CentralizedScenario):
        model = centralized_model(scen)
        if constraint.kind == "phase":
            gains, trace = optimize_phase_only_uqp(model, opt_cfg)
        else:
            gains, trace = optimize(model, constraint, opt_cfg)
    else:
        gains, trace, plan = optimize_decentralized(scen, constraint, opt_cfg,
                                                    refresh_plan=not args.freeze_plan)
    doc = _result_json(gains, trace, plan if args.dump_plan else None)
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_simulate_consensus(args) -> int:
    _, noise_kw, _ = _split_config(_load_config(args.config))
    if args.scenario:
        scen = load_scenario(args.scenario)
        if isinstance(scen, CentralizedScenario):
            raise InvalidConfig("consensus needs a decentralized scenario")
        n = scen.num_sensors
    else:
        topo = random_connected_topology(args.n, args.edge_prob, args.seed)
        scen = gen_decentralized_scenario(topo, NoiseConfig(**noise_kw),
                                          complex(args.theta), seed=args.seed)
        n = args.n
    gains = GainVector(np.ones(n, dtype=complex))
    _, plan = decentralized_model(scen, gains)
    rng = np.random.default_rng(args.seed)
    w = simulate_measurement(scen, gains, plan, rng)
    report = run_consensus(scen, gains, plan, received_by_sink(plan, w),
                           max_iter=args.max_iter, tol=args.tol, rho=args.rho)
    rows = []
    for it, est in enumerate(report.per_node_trace):
        for node in range(1, n + 1):
            e = est[node - 1]
            rows.append({"iter": it, "node": node,
                         "theta_hat_re": float(np.real(e)),
                         "theta_hat_im": float(np.imag(e)),
                         "abs_err": float(abs(e - report.theta_hat))})
    if args.dump_plan:
        json.dump(plan.to_json_dict(), sys.stderr)
        sys.stderr.write("\n")
    _write_text(args.out, render_csv(rows, columns_for("consensus")))
    if args.out:
        summary = {"theta_hat": [report.theta_hat.real, report.theta_hat.imag],
                   "analytic_variance": report.analytic_variance,
                   "iterations_to_tol": report.iterations_to_tol}
        sys.stdout.write(json.dumps(summary) + "\n")
    return 0


def _experiment_config(kind: str, args, defaults: dict) -> ExperimentConfig:
    opt_kw, noise_kw, exp_kw = _split_config(_load_config(args.config))
    fields: dict = {"kind": kind, **defaults, **exp_kw}
    fields["optimizer"] = OptimizerConfig(**{"seed": args.seed,
                                             **defaults.get("optimizer", {}), **opt_kw})
    if noise_kw:
        fields["noise"] = NoiseConfig(**noise_kw)
    if getattr(args, "n", None):
        fields["n_values"] = _int_list(args.n)
    if getattr(args, "sigma_grid", None):
        fields["sigma_grid"] = _float_list(args.sigma_grid)
    if args.realizations is not None:
        fields["realizations"] = args.realizations
    if getattr(args, "constraint", None):
        fields["constraint"] = ConstraintSpec.parse(args.constraint)
    if getattr(args, "rho", None) is not None:
        fields["rho"] = args.rho
    if getattr(args, "no_runtime", False):
        fields["include_runtime"] = False
    fields["seed"] = args.seed
    fields.pop("optimizer_defaults", None)
    return ExperimentConfig(**fields)


def _cmd_experiment(kind: str, args, defaults: dict) -> int:
    config = _experiment_config(kind, args, defaults)
    rows, meta = run_experiment(config)
    comment = None
    if isinstance(meta, dict) and "oracle" in meta:
        comment = f"oracle: {meta['oracle']}; success_rate: {meta['success_rate']}"
    text = render_csv(rows, columns_for(kind), config.include_runtime, comment)
    _write_text(args.out, text)
    if args.out and isinstance(meta, dict):
        sys.stdout.write(json.dumps({k: v for k, v in meta.items() if k != "methods"},
                                    default=str) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsngain",
                                     description="Sensor gain design and decentralized estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, constraint_default=None):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--config", default=None, help="JSON file with config overrides")
        if constraint_default is not None:
            p.add_argument("--constraint", default=constraint_default,
                           help="energy | phase | quant:Q | select:K[:phase]")

    p = sub.add_parser("gen-scenario", help="generate and serialize a scenario")
    p.add_argument("--kind", choices=("centralized", "decentralized"), default="centralized")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--theta", default="1")
    common(p)
    p.set_defaults(func=_cmd_gen_scenario)

    p = sub.add_parser("optimize", help="optimize gains for one scenario")
    p.add_argument("--scenario", default=None, help="scenario JSON (default: generate)")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--dump-plan", action="store_true")
    p.add_argument("--freeze-plan", action="store_true",
                   help="do not recompute the compression plan per outer iteration")
    common(p, constraint_default="energy")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("simulate-consensus", help="run one ADMM consensus trace")
    p.add_argument("--scenario", default=None)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--theta", default="10")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--dump-plan", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_simulate_consensus)

    p = sub.add_parser("sweep", help="variance sweep over sensor counts")
    p.add_argument("--n", default=None, help="comma list of sensor counts")
    p.add_argument("--realizations", type=int, default=None)
    p.add_argument("--no-runtime", action="store_true",
                   help="blank the runtime column for byte-reproducible output")
    common(p, constraint_default=None)
    p.add_argument("--constraint", default=None)
    p.set_defaults(func=lambda a: _cmd_experiment("sweep-N", a, {
        "n_values": (10, 30), "realizations": 30, "constraint": ConstraintSpec.phase_only(),
    }))

    p = sub.add_parser("select", help="sensor selection over a noise grid")
    p.add_argument("--n", default=None, help="total sensor count")
    p.add_argument("--sigma-grid", default=None, help="comma list of receiver noise variances")
    p.add_argument("--realizations", type=int, default=None)
    p.add_argument("--no-runtime", action="store_true")
    common(p, constraint_default=None)
    p.add_argument("--constraint", default=None)
    p.set_defaults(func=lambda a: _cmd_experiment("selection", a, {
        "n_values": (10,), "sigma_grid": (0.1, 1.0, 4.0), "realizations": 10,
        "constraint": ConstraintSpec.sensor_select(4),
    }))

    p = sub.add_parser("oracle-gap", help="optimizer vs exhaustive enumeration")
    p.add_argument("--n", default=None, help="comma list of candidate sizes")
    p.add_argument("--realizations", type=int, default=None)
    common(p, constraint_default=None)
    p.add_argument("--constraint", default=None)
    p.set_defaults(func=lambda a: _cmd_experiment("oracle-gap", a, {
        "n_values": (2, 3, 4), "realizations": 100,
        "constraint": ConstraintSpec.quantized(4),
        "optimizer": {"restarts": 10},
    }))

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WsnGainError as err:
        sys.stderr.write(json.dumps(err.to_json_dict()) + "\n")
        return 1
    except Exception as err:  # noqa: BLE001
        sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
