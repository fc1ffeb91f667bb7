"""Local and global ML estimation plus ADMM consensus.

The global estimate of theta is a weighted least-squares ratio; its
variance is the inverse of the information value a^H H^H R_w^{-1} H a.
In the decentralized setting every node reaches the global estimate by
running average consensus on two scalars (information value and state
information value) and taking their ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .diffusion import CompressionPlan, GlobalModel
from .errors import DegenerateGains, InvalidConfig, NoConvergence
from .netgraph import Topology
from .scenario import CentralizedScenario, DecentralizedScenario

if TYPE_CHECKING:  # pragma: no cover
    from .gainopt import ConstraintSpec

INFO_FLOOR = 1e-300  # below this the quadratic form carries no information
CONSENSUS_GUARD = 1e-12  # hold the previous ratio while |I_i(k)| is this small


@dataclass(frozen=True)
class GainVector:
    """Complex sensor gains together with the constraint they satisfy."""

    values: np.ndarray = field(repr=False)
    constraint: "ConstraintSpec | None" = None

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        if self.constraint is not None:
            self.constraint.check(self.values)

    def __len__(self) -> int:
        return len(self.values)


def _gain_values(gains) -> np.ndarray:
    return np.asarray(getattr(gains, "values", gains), dtype=complex)


def combined_covariance(model: GlobalModel, gains) -> np.ndarray:
    """R_w = H D V D^H H^H + sigma_n^2 I for the current gains."""
    a = _gain_values(gains)
    scaled = model.H * (np.abs(a) ** 2 * model.sensor_noise_var)[None, :]
    return scaled @ model.H.conj().T + model.noise_var * np.eye(model.num_rows)


def _information_and_weights(model: GlobalModel, a: np.ndarray):
    # weights w = R_w^{-1} H a; information value = (Ha)^H w, real and >= 0.
    ha = model.H @ a
    w = np.linalg.solve(combined_covariance(model, a), ha)
    info = float(np.real(ha.conj() @ w))
    return info, w


def global_mle(model: GlobalModel, gains, y: np.ndarray) -> complex:
    """Global ML estimate (a^H H^H R_w^{-1} H a)^{-1} a^H H^H R_w^{-1} y."""
    a = _gain_values(gains)
    info, w = _information_and_weights(model, a)
    if info < INFO_FLOOR:
        raise DegenerateGains("effective gains carry no information")
    return complex(w.conj() @ np.asarray(y, dtype=complex)) / info


def global_variance(model: GlobalModel, gains) -> float:
    """Estimation variance (a^H H^H (H D V D^H H^H + sigma_n^2 I)^{-1} H a)^{-1}."""
    a = _gain_values(gains)
    info, _ = _information_and_weights(model, a)
    if info < INFO_FLOOR:
        raise DegenerateGains("effective gains carry no information")
    return 1.0 / info


def _complex_gaussian(rng: np.random.Generator, var, size) -> np.ndarray:
    # CN(0, var): real and imaginary parts each N(0, var / 2).
    std = np.sqrt(np.asarray(var, dtype=float) / 2.0)
    return std * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def link_observations(scenario: DecentralizedScenario, gains, rng: np.random.Generator):
    """Draw one network round: every directed link's received sample.

    Each sensor k observes theta once (shared across all links it feeds);
    receiver noise is independent per directed link.  Returns a dict keyed
    by (rx, tx).
    """
    a = _gain_values(gains)
    n = scenario.topology.num_nodes
    v = _complex_gaussian(rng, scenario.sensor_noise_var, n)
    z = scenario.theta + v
    obs = {}
    for i, j in scenario.topology.edges:
        for rx, tx in ((i, j), (j, i)):
            noise = _complex_gaussian(rng, scenario.comm_noise_var, ())
            obs[(rx, tx)] = scenario.link_gain[(rx, tx)] * a[tx - 1] * z[tx - 1] + complex(noise)
    return obs


def simulate_measurement(scenario, gains, plan: CompressionPlan | None = None, rng=None) -> np.ndarray:
    """Draw one observation vector under the scenario's model.

    Centralized: y = H a theta + H D v + n with n over the M antennas.
    Decentralized: the compressed vector of retained link receptions, in
    the plan's row order (plan required).
    """
    if rng is None:
        rng = np.random.default_rng()
    a = _gain_values(gains)
    if isinstance(scenario, CentralizedScenario):
        v = _complex_gaussian(rng, scenario.sensor_noise_var, scenario.num_sensors)
        n = _complex_gaussian(rng, scenario.fc_noise_var, scenario.num_antennas)
        return scenario.channel @ (a * (scenario.theta + v)) + n
    if plan is None:
        raise InvalidConfig("decentralized simulation needs a compression plan")
    obs = link_observations(scenario, gains, rng)
    return np.array([obs[(sink, parent)] for sink, parent in plan.rows()], dtype=complex)


def received_by_sink(plan: CompressionPlan, stacked: np.ndarray) -> dict[int, np.ndarray]:
    """Split a stacked observation vector back into per-sink retained rows."""
    out: dict[int, np.ndarray] = {}
    idx = 0
    for sink, parents in enumerate(plan.retained_rows, start=1):
        out[sink] = np.asarray(stacked[idx : idx + len(parents)], dtype=complex)
        idx += len(parents)
    return out


def local_mle(sink: int, gains, scenario: DecentralizedScenario, received) -> tuple[complex, float]:
    """Initial local estimate of a sink from its strict neighbors.

    ``received`` holds one sample per neighbor, in the ascending order of
    S^sink.  Returns (estimate, variance); the variance is exactly the
    inverse of the sink's information value.
    """
    a = _gain_values(gains)
    neighbors = scenario.topology.neighbors(sink)
    y = np.asarray(received, dtype=complex)
    if len(y) != len(neighbors):
        raise InvalidConfig(f"expected {len(neighbors)} samples for sink {sink}")
    info = 0.0
    num = 0.0 + 0.0j
    for y_k, k in zip(y, neighbors):
        ha = scenario.link_gain[(sink, k)] * a[k - 1]
        denom = abs(ha) ** 2 * scenario.sensor_noise_var[k - 1] + scenario.comm_noise_var
        info += abs(ha) ** 2 / denom
        num += np.conj(ha) * y_k / denom
    if info < INFO_FLOOR:
        raise DegenerateGains(f"sink {sink} neighborhood carries no information")
    return complex(num / info), 1.0 / info


@dataclass(frozen=True)
class AdmmState:
    """One consensus stream: per-node copies, duals, step size, iteration.

    The full estimator runs two instances: a real-valued stream for the
    information values and a complex one for the state information values
    (the updates are linear with real coefficients, so complex payloads
    split into two independent real streams automatically).
    """

    values: np.ndarray = field(repr=False)
    duals: np.ndarray = field(repr=False)
    rho: float = 1.0
    k: int = 0

    def __post_init__(self):
        if self.rho <= 0:
            raise InvalidConfig("ADMM step rho must be positive")
        if self.values.shape != self.duals.shape:
            raise InvalidConfig("values and duals must have matching shapes")


def _admm_update(values, duals, adj, deg, rho, x):
    neighbor_sum = adj @ values
    new_values = (rho * deg * values + rho * neighbor_sum - duals + x) / (1.0 + 2.0 * rho * deg)
    new_duals = duals + rho * (deg * new_values - adj @ new_values)
    return new_values, new_duals


def admm_step(state: AdmmState, topology: Topology, x) -> AdmmState:
    """One synchronous ADMM consensus round.

    y_i <- (rho d_i y_i + rho sum_{j in S^i} y_j - lambda_i + x_i) / (1 + 2 rho d_i)
    lambda_i <- lambda_i + rho (d_i y_i_new - sum_{j in S^i} y_j_new)

    All nodes read the previous round's neighbor values (bulk update).
    """
    x = np.asarray(x)
    if x.shape != state.values.shape:
        raise InvalidConfig("payload length does not match state")
    adj = topology.adjacency()
    deg = topology.degrees().astype(float)
    new_values, new_duals = _admm_update(state.values, state.duals, adj, deg, state.rho, x)
    return AdmmState(new_values, new_duals, state.rho, state.k + 1)


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of a consensus run."""

    theta_hat: complex
    analytic_variance: float
    iterations_to_tol: int
    per_node_trace: tuple[np.ndarray, ...] | None = None


def initial_streams(scenario: DecentralizedScenario, gains, plan: CompressionPlan, received_per_node):
    """Per-node information and state information values over retained rows.

    I_i(0) sums |h a|^2 / (|h a|^2 sigma_v^2 + sigma_n^2) over sink i's
    retained parents; P_i(0) is the matching data-weighted sum.  Their
    network totals give the global MLE as theta_hat = sum P / sum I.
    """
    a = _gain_values(gains)
    n = scenario.topology.num_nodes
    i0 = np.zeros(n)
    p0 = np.zeros(n, dtype=complex)
    for sink, parents in enumerate(plan.retained_rows, start=1):
        y = np.asarray(received_per_node.get(sink, ()), dtype=complex)
        if len(y) != len(parents):
            raise InvalidConfig(f"sink {sink} expects {len(parents)} retained samples")
        for y_k, k in zip(y, parents):
            ha = scenario.link_gain[(sink, k)] * a[k - 1]
            denom = abs(ha) ** 2 * scenario.sensor_noise_var[k - 1] + scenario.comm_noise_var
            i0[sink - 1] += abs(ha) ** 2 / denom
            p0[sink - 1] += np.conj(ha) * y_k / denom
    return i0, p0


def run_consensus(
    scenario: DecentralizedScenario,
    gains,
    plan: CompressionPlan,
    received_per_node,
    max_iter: int = 1000,
    tol: float = 1e-6,
    rho: float = 1.0,
    record_trace: bool = True,
    stop_mode: str = "analytic",
) -> EstimateReport:
    """Drive every node's estimate to the global MLE by average consensus.

    Two ADMM streams run in parallel on the initial information and state
    information values; each node's running estimate is the ratio
    theta_i(k) = P_i(k) / I_i(k), guarded while |I_i(k)| is tiny (the
    previous value is held, starting from zero).  Stops once
    max_i |theta_i(k) - theta_ML| <= tol * |theta_ML|; stop_mode
    "trailing" instead waits for max_i |theta_i(k) - theta_i(k-1)| to fall
    under the same scaled tolerance (for deployments where theta_ML is
    not computable at the nodes).

    Raises
    ------
    NoConvergence
        After max_iter rounds; the exception carries the partial report.
    """
    if tol <= 0:
        raise InvalidConfig("tolerance must be positive")
    if stop_mode not in ("analytic", "trailing"):
        raise InvalidConfig("stop_mode must be 'analytic' or 'trailing'")
    topo = scenario.topology
    i0, p0 = initial_streams(scenario, gains, plan, received_per_node)
    total_info = float(np.sum(i0))
    if total_info < INFO_FLOOR:
        raise DegenerateGains("network carries no information")
    theta_ml = complex(np.sum(p0) / total_info)
    variance = 1.0 / total_info

    adj = topo.adjacency()
    deg = topo.degrees().astype(float)
    i_vals, i_duals = i0.astype(float).copy(), np.zeros(topo.num_nodes)
    p_vals, p_duals = p0.astype(complex).copy(), np.zeros(topo.num_nodes, dtype=complex)

    estimates = np.zeros(topo.num_nodes, dtype=complex)
    trace: list[np.ndarray] = []
    scale = max(abs(theta_ml), INFO_FLOOR)
    for k in range(max_iter + 1):
        previous = estimates
        ok = np.abs(i_vals) > CONSENSUS_GUARD
        estimates = np.where(ok, np.divide(p_vals, np.where(ok, i_vals, 1.0)), estimates)
        if record_trace:
            trace.append(estimates.copy())
        if stop_mode == "analytic":
            done = np.max(np.abs(estimates - theta_ml)) <= tol * scale
        else:
            done = k > 0 and np.max(np.abs(estimates - previous)) <= tol * scale
        if done:
            return EstimateReport(theta_ml, variance, k, tuple(trace) if record_trace else None)
        if k == max_iter:
            break
        i_vals, i_duals = _admm_update(i_vals, i_duals, adj, deg, rho, i0)
        p_vals, p_duals = _admm_update(p_vals, p_duals, adj, deg, rho, p0)
    report = EstimateReport(theta_ml, variance, max_iter, tuple(trace) if record_trace else None)
    raise NoConvergence(f"consensus not within tol after {max_iter} iterations", report)
