"""Compression and diffusion of sensor transmissions.

Every node broadcasts its amplified observation to all neighbors; to avoid
duplicate information in the network, each transmission is retained by
exactly one neighbor (the carrier, picked by highest information value).
Stacking the retained rows produces a compressed global linear model whose
quadratic form decouples into per-sink local forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentPlan
from .netgraph import Topology
from .scenario import CentralizedScenario, DecentralizedScenario


def _gain_values(gains) -> np.ndarray:
    # Accept a bare array or anything carrying a .values array.
    return np.asarray(getattr(gains, "values", gains), dtype=complex)


@dataclass(frozen=True)
class CompressionPlan:
    """Carrier assignment and the induced row retention.

    Attributes
    ----------
    carrier : tuple of int
        ``carrier[i - 1]`` is the neighbor chosen to retain node i's
        transmission.
    retained_rows : tuple of tuple of int
        ``retained_rows[i - 1]`` lists, ascending, the parent nodes whose
        transmissions sink i keeps.  This is the row-selection of sink i.
    r : int
        Number of discarded transmissions, 2|E| - N.
    m_dim : int
        Total retained rows; always N (one carrier per parent).
    """

    carrier: tuple[int, ...]
    retained_rows: tuple[tuple[int, ...], ...]
    r: int
    m_dim: int

    def rows(self):
        """Yield (sink, parent) in global row order: sink-major, parent ascending."""
        for sink, parents in enumerate(self.retained_rows, start=1):
            for parent in parents:
                yield sink, parent

    def to_json_dict(self) -> dict:
        return {"carrier": list(self.carrier), "r": self.r, "m_dim": self.m_dim}


@dataclass(frozen=True)
class GlobalModel:
    """Unified linear observation model y = H a theta + H Diag(a) v + n.

    Covers both settings: the centralized fusion-center model uses the raw
    M x N channel matrix, while the decentralized compressed model stacks
    one retained row per sensor (noise_map records which directed link each
    row came from).  The combined noise covariance is
    H D V D^H H^H + noise_var * I with D = Diag(a) and V = Diag(sensor_noise_var).
    """

    H: np.ndarray = field(repr=False)
    sensor_noise_var: np.ndarray = field(repr=False)
    noise_var: float
    noise_map: tuple[tuple[int, int], ...] | None = None

    @property
    def num_sensors(self) -> int:
        return self.H.shape[1]

    @property
    def num_rows(self) -> int:
        return self.H.shape[0]


def information_value(sink: int, gains, scenario: DecentralizedScenario) -> float:
    """Local information value of a sink over its strict neighbors.

    With diagonal noise this is
    sum_k |h_{i,k} a_k|^2 / (|h_{i,k} a_k|^2 sigma_{v,k}^2 + sigma_n^2),
    the inverse variance of the sink's local ML estimate.
    """
    a = _gain_values(gains)
    sn2 = scenario.comm_noise_var
    total = 0.0
    for k in scenario.topology.neighbors(sink):
        ha = scenario.link_gain[(sink, k)] * a[k - 1]
        p = abs(ha) ** 2
        total += p / (p * scenario.sensor_noise_var[k - 1] + sn2)
    return float(total)


def information_table(gains, scenario: DecentralizedScenario) -> np.ndarray:
    """Information values for all sinks, indexed by node - 1."""
    n = scenario.topology.num_nodes
    return np.array([information_value(i, gains, scenario) for i in range(1, n + 1)])


def assign_carriers(topology: Topology, info: np.ndarray) -> CompressionPlan:
    """Pick each node's carrier: the neighbor with the highest information value.

    Ties break toward the lowest node index.  The retained-row lists invert
    the carrier map, so every transmission appears exactly once and the
    compressed dimension equals N.
    """
    info = np.asarray(info, dtype=float)
    if len(info) != topology.num_nodes:
        raise InconsistentPlan("information table length does not match topology")
    carrier = []
    for i in range(1, topology.num_nodes + 1):
        best = None
        for j in topology.neighbors(i):
            if best is None or info[j - 1] > info[best - 1]:
                best = j
        carrier.append(best)
    retained: list[list[int]] = [[] for _ in range(topology.num_nodes)]
    for parent, sink in enumerate(carrier, start=1):
        retained[sink - 1].append(parent)
    retained_rows = tuple(tuple(sorted(row)) for row in retained)
    r = 2 * topology.num_edges - topology.num_nodes
    return CompressionPlan(tuple(carrier), retained_rows, r, topology.num_nodes)


def assemble_global_model(plan: CompressionPlan, scenario: DecentralizedScenario) -> GlobalModel:
    """Stack the retained rows into the compressed global model.

    Row order is sink-major with parents ascending inside each sink.  The
    row for (sink i, parent k) holds h_{i,k} in column k and zeros
    elsewhere; the estimator is invariant to the row order.
    """
    n = scenario.topology.num_nodes
    rows = list(plan.rows())
    if len(rows) != plan.m_dim:
        raise InconsistentPlan("retained row count does not match m_dim")
    H = np.zeros((len(rows), n), dtype=complex)
    noise_map = []
    for r_idx, (sink, parent) in enumerate(rows):
        if parent not in scenario.topology.neighbors(sink):
            raise InconsistentPlan(f"plan keeps non-neighbor {parent} at sink {sink}")
        H[r_idx, parent - 1] = scenario.link_gain[(sink, parent)]
        noise_map.append((sink, parent))
    return GlobalModel(
        H=H,
        sensor_noise_var=np.asarray(scenario.sensor_noise_var, dtype=float),
        noise_var=scenario.comm_noise_var,
        noise_map=tuple(noise_map),
    )


def centralized_model(scenario: CentralizedScenario) -> GlobalModel:
    """View a centralized scenario as a :class:`GlobalModel` (already stacked)."""
    return GlobalModel(
        H=scenario.channel,
        sensor_noise_var=np.asarray(scenario.sensor_noise_var, dtype=float),
        noise_var=scenario.fc_noise_var,
        noise_map=None,
    )


def decentralized_model(scenario: DecentralizedScenario, gains):
    """Full pipeline: information values, carrier assignment, model assembly.

    Returns (model, plan).  The information values depend on the current
    gain magnitudes, so gain optimization recomputes the plan per outer
    iteration unless told to freeze it.
    """
    info = information_table(gains, scenario)
    plan = assign_carriers(scenario.topology, info)
    return assemble_global_model(plan, scenario), plan
