"""Experiment runner: sweeps, baselines and CSV emission.

Variance sweeps over the sensor count, sensor-selection comparisons over a
receiver-noise grid, exhaustive-enumeration oracle gaps for quantized
phases, and consensus traces.  All randomness derives per realization from
(master seed, tags), so identical configurations yield identical outputs.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace

import numpy as np

from .diffusion import centralized_model, decentralized_model
from .errors import InvalidConfig, TooLarge, WsnGainError
from .estimator import (
    GainVector,
    global_variance,
    received_by_sink,
    run_consensus,
    simulate_measurement,
)
from .gainopt import (
    ConstraintSpec,
    OptimizerConfig,
    optimize,
    optimize_phase_only_uqp,
    refine,
    uqp_matrix,
)
from .netgraph import random_connected_topology
from .scenario import NoiseConfig, gen_centralized_scenario, gen_decentralized_scenario

EXHAUSTIVE_BUDGET = 10**7

SWEEP_COLUMNS = ("N", "method", "mean_variance", "mean_runtime_s", "realizations", "failures")
SELECTION_COLUMNS = ("sigma_n2", "method", "mean_variance")
ORACLE_GAP_COLUMNS = ("seed", "N", "variance_opt", "variance_best", "ratio", "hit")
CONSENSUS_COLUMNS = ("iter", "node", "theta_hat_re", "theta_hat_im", "abs_err")

KINDS = ("sweep-N", "sweep-noise", "consensus", "selection", "oracle-gap")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment specification.

    ``n_values`` is the sensor-count grid (or the candidate sizes for the
    oracle-gap study); ``sigma_grid`` is the receiver-noise grid for
    selection experiments.  ``include_runtime`` exists because wall times
    are inherently non-reproducible: disabling it leaves the runtime
    column empty so identical (config, seed) pairs produce identical CSV
    bytes.
    """

    kind: str
    n_values: tuple[int, ...] = ()
    sigma_grid: tuple[float, ...] = ()
    realizations: int = 300
    constraint: ConstraintSpec = ConstraintSpec.phase_only()
    optimizer: OptimizerConfig = OptimizerConfig()
    noise: NoiseConfig = NoiseConfig()
    num_antennas: int = 4
    theta: complex = 1 + 0j
    seed: int = 0
    rho: float = 1.0
    edge_probability: float = 0.3
    max_iter: int = 500
    tol: float = 1e-6
    include_runtime: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidConfig(f"unknown experiment kind {self.kind!r}")
        if self.realizations < 1:
            raise InvalidConfig("realizations must be at least 1")
        if self.kind in ("sweep-N", "oracle-gap", "consensus") and not self.n_values:
            raise InvalidConfig(f"{self.kind} needs a nonempty n_values")
        if self.kind in ("selection", "sweep-noise") and not self.sigma_grid:
            raise InvalidConfig(f"{self.kind} needs a nonempty sigma_grid")
        if self.kind == "selection" and self.constraint.kind != "select":
            raise InvalidConfig("selection experiments need a select constraint")
        if self.kind == "oracle-gap" and self.constraint.kind != "quant":
            raise InvalidConfig("oracle-gap experiments need a quant constraint")


def derived_seed(master: int, *tags: int) -> int:
    """Stable per-realization seed from (master seed, tags)."""
    return int(np.random.SeedSequence((master,) + tags).generate_state(1)[0])


def baseline_all_ones(model) -> tuple[GainVector, float]:
    """Reference point a = 1 (no gain design); deterministic."""
    gains = GainVector(np.ones(model.num_sensors, dtype=complex))
    return gains, global_variance(model, gains)


def baseline_exhaustive_quantized(model, q_levels: int,
                                  budget: int = EXHAUSTIVE_BUDGET) -> tuple[GainVector, float]:
    """Global optimum over all Q^N phase assignments.

    All candidates are unit modulus, so the combined covariance is the
    constant phase-only one and every objective is a^H B a; candidates are
    scored in chunks.  Raises TooLarge beyond the enumeration budget.
    """
    n = model.num_sensors
    total = q_levels**n
    if total > budget:
        raise TooLarge(f"{q_levels}^{n} = {total} exceeds the enumeration budget")
    b_mat = uqp_matrix(model)
    grid = np.exp(2j * np.pi * np.arange(q_levels) / q_levels)
    best_obj = -np.inf
    best_a = None
    chunk = 100_000
    combos = itertools.product(range(q_levels), repeat=n)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        cand = grid[np.array(block)]
        objs = np.real(np.einsum("bi,ij,bj->b", cand.conj(), b_mat, cand))
        k = int(np.argmax(objs))
        if objs[k] > best_obj:
            best_obj = float(objs[k])
            best_a = cand[k]
    gains = GainVector(best_a, ConstraintSpec.quantized(q_levels))
    return gains, 1.0 / best_obj


def _uniform_support_gains(n: int, support) -> GainVector:
    a = np.zeros(n, dtype=complex)
    a[np.asarray(support, dtype=int)] = np.sqrt(n / len(support))
    return GainVector(a)


def baseline_selection(model, k_active: int, policy: str) -> tuple[GainVector, float]:
    """Subset-selection baselines (reimplemented by interpretation).

    "greedy" grows the subset one sensor at a time, always adding the one
    that minimizes the resulting variance under uniform fixed-energy gains
    on the current subset.  "min-sensor-noise" keeps the K sensors with
    the smallest observation noise.  Both then use uniform gains
    sqrt(N / K) on the chosen support.
    """
    n = model.num_sensors
    if not 1 <= k_active < n:
        raise InvalidConfig(f"need 1 <= K < N, got K={k_active}, N={n}")
    if policy == "min-sensor-noise":
        support = np.argsort(model.sensor_noise_var, kind="stable")[:k_active]
    elif policy == "greedy":
        support = []
        remaining = list(range(n))
        while len(support) < k_active:
            best_j, best_v = None, np.inf
            for j in remaining:
                gains = _uniform_support_gains(n, support + [j])
                v = global_variance(model, gains)
                if v < best_v:
                    best_j, best_v = j, v
            support.append(best_j)
            remaining.remove(best_j)
    else:
        raise InvalidConfig(f"unknown selection policy {policy!r}")
    gains = _uniform_support_gains(n, support)
    return gains, global_variance(model, gains)


def _optimize_for(model, constraint, opt_config):
    # phase-only runs go through the constant-matrix fast path
    if constraint.kind == "phase":
        return optimize_phase_only_uqp(model, opt_config)
    return optimize(model, constraint, opt_config)


def run_sweep(config: ExperimentConfig):
    """Variance vs sensor count: optimizer against the all-ones baseline.

    Returns (rows, metadata).  Failed realizations are excluded from the
    means and counted in the failures column; they are never silently
    dropped.
    """
    rows = []
    meta = {"kind": config.kind, "methods": ("optimized", "all-ones")}
    for n in config.n_values:
        results = {"optimized": [], "all-ones": []}
        runtimes = {"optimized": [], "all-ones": []}
        failures = 0
        for i in range(config.realizations):
            scen = gen_centralized_scenario(
                n, config.num_antennas, config.noise, config.theta,
                seed=derived_seed(config.seed, n, i),
            )
            model = centralized_model(scen)
            try:
                opt_cfg = replace(config.optimizer, seed=derived_seed(config.seed, n, i, 1))
                _, trace = _optimize_for(model, config.constraint, opt_cfg)
                t0 = time.perf_counter()
                _, v_ones = baseline_all_ones(model)
                ones_time = time.perf_counter() - t0
            except WsnGainError:
                failures += 1
                continue
            results["optimized"].append(trace.final_variance)
            runtimes["optimized"].append(trace.wall_time_s)
            results["all-ones"].append(v_ones)
            runtimes["all-ones"].append(ones_time)
        for method in ("optimized", "all-ones"):
            used = results[method]
            rows.append({
                "N": n,
                "method": method,
                "mean_variance": float(np.mean(used)) if used else float("nan"),
                "mean_runtime_s": float(np.mean(runtimes[method])) if used else float("nan"),
                "realizations": len(used),
                "failures": failures,
            })
    return rows, meta


def run_selection_experiment(config: ExperimentConfig):
    """Sensor selection over a receiver-noise grid.

    Compares the constrained optimizer ("proposed") against the greedy and
    min-sensor-noise baselines and the matched-energy all-N reference.
    The all-N run is refined from the proposed K-sparse solution when the
    energy budgets match, so it lower-bounds every K < N method per
    realization by feasible-set inclusion.
    """
    k = config.constraint.k_active
    n = config.n_values[0] if config.n_values else 10
    methods = ("proposed", "greedy", "min-sensor-noise", "all-N")
    rows = []
    meta = {
        "kind": config.kind,
        "methods": methods,
        "note": "greedy and min-sensor-noise baselines reimplemented by interpretation",
        "failures": 0,
    }
    for sigma_n2 in config.sigma_grid:
        noise = replace(config.noise, channel_noise_var=float(sigma_n2))
        results = {m: [] for m in methods}
        failures = 0
        for i in range(config.realizations):
            tag = derived_seed(config.seed, i, int(1e6 * sigma_n2) % (2**31))
            scen = gen_centralized_scenario(n, config.num_antennas, noise, config.theta, seed=tag)
            model = centralized_model(scen)
            try:
                opt_cfg = replace(config.optimizer, seed=derived_seed(config.seed, i, 2))
                prop_gains, prop_trace = optimize(model, config.constraint, opt_cfg)
                greedy_gains, v_greedy = baseline_selection(model, k, "greedy")
                minnoise_gains, v_minnoise = baseline_selection(model, k, "min-sensor-noise")
                _, all_trace = optimize(model, ConstraintSpec.fixed_energy(), opt_cfg)
                v_all = all_trace.final_variance
                if config.constraint.select_mode == "energy":
                    # feasible-set inclusion: every K-sparse energy-N vector is a
                    # valid warm start, so refining from each method's solution
                    # keeps all-N a per-realization lower bound
                    for warm_start in (prop_gains, greedy_gains, minnoise_gains):
                        _, warm = refine(model, warm_start.values, ConstraintSpec.fixed_energy(), opt_cfg)
                        v_all = min(v_all, warm.final_variance)
            except WsnGainError:
                failures += 1
                continue
            results["proposed"].append(prop_trace.final_variance)
            results["greedy"].append(v_greedy)
            results["min-sensor-noise"].append(v_minnoise)
            results["all-N"].append(v_all)
        meta["failures"] += failures
        for method in methods:
            used = results[method]
            rows.append({
                "sigma_n2": float(sigma_n2),
                "method": method,
                "mean_variance": float(np.mean(used)) if used else float("nan"),
            })
    return rows, meta


def run_oracle_gap(config: ExperimentConfig):
    """Optimizer vs exhaustive enumeration on small quantized instances.

    One row per seed; the hit column marks runs whose variance is within
    10 percent of the enumerated optimum.  The enumeration substitutes
    for comparisons against external solvers, as recorded in the
    metadata.
    """
    q = config.constraint.q_levels
    rows = []
    hits = 0
    for i in range(config.realizations):
        pick = np.random.default_rng(derived_seed(config.seed, i, 7))
        n = int(pick.choice(config.n_values))
        scen = gen_centralized_scenario(
            n, config.num_antennas, config.noise, config.theta,
            seed=derived_seed(config.seed, i),
        )
        model = centralized_model(scen)
        opt_cfg = replace(config.optimizer, seed=derived_seed(config.seed, i, 3))
        _, trace = optimize(model, config.constraint, opt_cfg)
        _, v_best = baseline_exhaustive_quantized(model, q)
        ratio = trace.final_variance / v_best
        hit = ratio <= 1.10 + 1e-12
        hits += int(hit)
        rows.append({
            "seed": i,
            "N": n,
            "variance_opt": trace.final_variance,
            "variance_best": v_best,
            "ratio": ratio,
            "hit": int(hit),
        })
    meta = {
        "kind": config.kind,
        "oracle": "exhaustive enumeration (substitute for external solver baselines)",
        "success_rate": hits / config.realizations,
    }
    return rows, meta


def run_consensus_experiment(config: ExperimentConfig):
    """One decentralized consensus run with a per-iteration trace.

    Generates a random connected network, a decentralized scenario, one
    round of measurements, and drives all nodes to the global estimate.
    Returns (rows, report) with one row per (iteration, node).
    """
    n = config.n_values[0]
    topo = random_connected_topology(n, config.edge_probability, derived_seed(config.seed, 11))
    scen = gen_decentralized_scenario(topo, config.noise, config.theta,
                                      seed=derived_seed(config.seed, 12))
    gains = GainVector(np.ones(n, dtype=complex))
    _, plan = decentralized_model(scen, gains)
    rng = np.random.default_rng(derived_seed(config.seed, 13))
    w = simulate_measurement(scen, gains, plan, rng)
    received = received_by_sink(plan, w)
    report = run_consensus(scen, gains, plan, received,
                           max_iter=config.max_iter, tol=config.tol, rho=config.rho)
    rows = []
    for it, est in enumerate(report.per_node_trace):
        for node in range(1, n + 1):
            e = est[node - 1]
            rows.append({
                "iter": it,
                "node": node,
                "theta_hat_re": float(np.real(e)),
                "theta_hat_im": float(np.imag(e)),
                "abs_err": float(abs(e - report.theta_hat)),
            })
    return rows, report


def run_experiment(config: ExperimentConfig):
    """Dispatch on the experiment kind; returns (rows, metadata_or_report)."""
    if config.kind == "sweep-N":
        return run_sweep(config)
    if config.kind in ("selection", "sweep-noise"):
        return run_selection_experiment(config)
    if config.kind == "oracle-gap":
        return run_oracle_gap(config)
    return run_consensus_experiment(config)


def columns_for(kind: str) -> tuple[str, ...]:
    if kind == "sweep-N":
        return SWEEP_COLUMNS
    if kind in ("selection", "sweep-noise"):
        return SELECTION_COLUMNS
    if kind == "oracle-gap":
        return ORACLE_GAP_COLUMNS
    return CONSENSUS_COLUMNS


def render_csv(rows, columns, include_runtime: bool = True, comment: str | None = None) -> str:
    """Render rows as CSV text with a fixed column order.

    Runtime columns are blanked when include_runtime is false, which makes
    the bytes a pure function of (config, seed).  An optional leading
    comment line records oracle substitutions and other metadata.
    """
    lines = []
    if comment:
        lines.append("# " + comment)
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for col in columns:
            value = row.get(col, "")
            if col.endswith("runtime_s") and not include_runtime:
                value = ""
            cells.append(repr(value) if isinstance(value, float) else str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_csv(rows, columns, path, include_runtime: bool = True, comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(rows, columns, include_runtime, comment))
