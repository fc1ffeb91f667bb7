"""Physical model generation and serialization.

A scenario bundles channels, noise statistics and the true parameter theta.
Centralized scenarios describe N single-antenna sensors heard by an
M-antenna fusion center; decentralized scenarios attach a complex gain to
every directed link of a connected graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig
from .netgraph import Topology, build_topology


@dataclass(frozen=True)
class NoiseConfig:
    """Default ranges used by the generators.

    Distances are drawn uniformly from ``d_range`` and sensor noise
    variances from ``v_range``; the receiver-side noise variance is the
    fixed ``channel_noise_var``.  Nothing in the model pins these values,
    so they are configurable and documented here.
    """

    d_range: tuple[float, float] = (1.0, 10.0)
    v_range: tuple[float, float] = (0.5, 1.5)
    channel_noise_var: float = 1.0
    path_loss_exp: float = 1.0

    def __post_init__(self):
        lo, hi = self.d_range
        if not (0 < lo <= hi):
            raise InvalidConfig(f"bad distance range {self.d_range}")
        lo, hi = self.v_range
        if not (0 < lo <= hi):
            raise InvalidConfig(f"bad sensor noise range {self.v_range}")
        if self.channel_noise_var <= 0:
            raise InvalidConfig("channel noise variance must be positive")


@dataclass(frozen=True)
class CentralizedScenario:
    """N sensors, one M-antenna fusion center.

    ``channel`` is the complex M x N matrix H whose column i is sensor i's
    channel.  ``sensor_noise_var`` holds the diagonal of the (diagonal)
    observation noise covariance V; ``fc_noise_var`` is sigma_n^2, so the
    receiver noise covariance is sigma_n^2 * I_M.
    """

    num_sensors: int
    num_antennas: int
    channel: np.ndarray = field(repr=False)
    sensor_noise_var: np.ndarray = field(repr=False)
    fc_noise_var: float
    theta: complex
    seed: int | None = None
    alpha: float = 1.0
    d_range: tuple[float, float] = (1.0, 10.0)
    v_range: tuple[float, float] = (0.5, 1.5)

    def __post_init__(self):
        if np.any(np.asarray(self.sensor_noise_var) <= 0) or self.fc_noise_var <= 0:
            raise InvalidConfig("noise variances must be strictly positive")
        if self.channel.shape != (self.num_antennas, self.num_sensors):
            raise InvalidConfig("channel shape does not match (M, N)")
        if np.any(np.all(self.channel == 0, axis=0)):
            raise InvalidConfig("channel has an all-zero column")


@dataclass(frozen=True)
class DecentralizedScenario:
    """Sensors on a graph; every directed link carries its own gain.

    ``link_gain[(rx, tx)]`` is h_{rx,tx}, the coefficient seen by receiver
    ``rx`` for transmitter ``tx``.  Both directions of each edge are
    present and may differ.
    """

    topology: Topology
    link_gain: dict[tuple[int, int], complex] = field(repr=False)
    sensor_noise_var: np.ndarray = field(repr=False)
    comm_noise_var: float
    theta: complex
    seed: int | None = None
    alpha: float = 1.0
    d_range: tuple[float, float] = (1.0, 10.0)
    v_range: tuple[float, float] = (0.5, 1.5)

    def __post_init__(self):
        if np.any(np.asarray(self.sensor_noise_var) <= 0) or self.comm_noise_var <= 0:
            raise InvalidConfig("noise variances must be strictly positive")
        want = set()
        for i, j in self.topology.edges:
            want.add((i, j))
            want.add((j, i))
        if set(self.link_gain) != want:
            raise InvalidConfig("link gains must cover both directions of every edge")

    @property
    def num_sensors(self) -> int:
        return self.topology.num_nodes


def gen_channel_coefficient(rng: np.random.Generator, distance: float, path_loss_exp: float) -> complex:
    """One channel draw e^{j gamma} / d^alpha with gamma ~ Uniform[0, 2pi)."""
    if distance <= 0:
        raise InvalidConfig(f"distance must be positive, got {distance}")
    gamma = rng.uniform(0.0, 2.0 * np.pi)
    return complex(np.exp(1j * gamma) / distance**path_loss_exp)


def gen_centralized_scenario(
    num_sensors: int,
    num_antennas: int = 4,
    noise: NoiseConfig = NoiseConfig(),
    theta: complex = 1 + 0j,
    seed: int = 0,
) -> CentralizedScenario:
    """Generate a centralized scenario, deterministic given the seed.

    Each sensor gets one distance d_i shared by all M antennas; phases are
    drawn independently per antenna, so H[m, i] = e^{j gamma_{m,i}} / d_i^alpha.
    """
    if num_sensors < 1 or num_antennas < 1:
        raise InvalidConfig("need at least one sensor and one antenna")
    rng = np.random.default_rng(seed)
    d = rng.uniform(noise.d_range[0], noise.d_range[1], num_sensors)
    phases = rng.uniform(0.0, 2.0 * np.pi, (num_antennas, num_sensors))
    channel = np.exp(1j * phases) / d[None, :] ** noise.path_loss_exp
    v = rng.uniform(noise.v_range[0], noise.v_range[1], num_sensors)
    return CentralizedScenario(
        num_sensors=num_sensors,
        num_antennas=num_antennas,
        channel=channel,
        sensor_noise_var=v,
        fc_noise_var=noise.channel_noise_var,
        theta=complex(theta),
        seed=seed,
        alpha=noise.path_loss_exp,
        d_range=noise.d_range,
        v_range=noise.v_range,
    )


def gen_decentralized_scenario(
    topology: Topology,
    noise: NoiseConfig = NoiseConfig(),
    theta: complex = 1 + 0j,
    seed: int = 0,
) -> DecentralizedScenario:
    """Generate per-directed-link gains on a given topology.

    Every directed link gets an independent distance and phase draw; links
    are visited in sorted edge order, (i, j) before (j, i), which pins the
    RNG stream for reproducibility.
    """
    rng = np.random.default_rng(seed)
    link_gain: dict[tuple[int, int], complex] = {}
    for i, j in topology.edges:
        for rx, tx in ((i, j), (j, i)):
            d = rng.uniform(noise.d_range[0], noise.d_range[1])
            link_gain[(rx, tx)] = gen_channel_coefficient(rng, d, noise.path_loss_exp)
    v = rng.uniform(noise.v_range[0], noise.v_range[1], topology.num_nodes)
    return DecentralizedScenario(
        topology=topology,
        link_gain=link_gain,
        sensor_noise_var=v,
        comm_noise_var=noise.channel_noise_var,
        theta=complex(theta),
        seed=seed,
        alpha=noise.path_loss_exp,
        d_range=noise.d_range,
        v_range=noise.v_range,
    )


def _c2pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def to_json_dict(scenario) -> dict:
    """Serialize a scenario to the documented JSON schema (lossless)."""
    if isinstance(scenario, CentralizedScenario):
        return {
            "kind": "centralized",
            "N": scenario.num_sensors,
            "M": scenario.num_antennas,
            "theta": _c2pair(scenario.theta),
            "H": [[_c2pair(z) for z in row] for row in scenario.channel],
            "sensor_noise_var": [float(x) for x in scenario.sensor_noise_var],
            "fc_noise_var": float(scenario.fc_noise_var),
            "seed": scenario.seed,
            "alpha": scenario.alpha,
            "d_range": list(scenario.d_range),
            "v_range": list(scenario.v_range),
        }
    if isinstance(scenario, DecentralizedScenario):
        return {
            "kind": "decentralized",
            "N": scenario.num_sensors,
            "theta": _c2pair(scenario.theta),
            "edges": [[i, j] for i, j in scenario.topology.edges],
            "links": [
                {"rx": rx, "tx": tx, "gain": _c2pair(g)}
                for (rx, tx), g in sorted(scenario.link_gain.items())
            ],
            "sensor_noise_var": [float(x) for x in scenario.sensor_noise_var],
            "comm_noise_var": float(scenario.comm_noise_var),
            "seed": scenario.seed,
            "alpha": scenario.alpha,
            "d_range": list(scenario.d_range),
            "v_range": list(scenario.v_range),
        }
    raise InvalidConfig(f"cannot serialize {type(scenario).__name__}")


def from_json_dict(doc: dict):
    """Inverse of :func:`to_json_dict`."""
    kind = doc.get("kind")
    if kind not in ("centralized", "decentralized"):
        raise InvalidConfig(f"unknown scenario kind {kind!r}")
    theta = complex(doc["theta"][0], doc["theta"][1])
    common = dict(
        seed=doc.get("seed"),
        alpha=doc.get("alpha", 1.0),
        d_range=tuple(doc.get("d_range", (1.0, 10.0))),
        v_range=tuple(doc.get("v_range", (0.5, 1.5))),
    )
    if kind == "centralized":
        channel = np.array(
            [[complex(re, im) for re, im in row] for row in doc["H"]], dtype=complex
        )
        return CentralizedScenario(
            num_sensors=doc["N"],
            num_antennas=doc["M"],
            channel=channel,
            sensor_noise_var=np.array(doc["sensor_noise_var"], dtype=float),
            fc_noise_var=doc["fc_noise_var"],
            theta=theta,
            **common,
        )
    topology = build_topology(doc["N"], [tuple(e) for e in doc["edges"]])
    link_gain = {
        (entry["rx"], entry["tx"]): complex(entry["gain"][0], entry["gain"][1])
        for entry in doc["links"]
    }
    return DecentralizedScenario(
        topology=topology,
        link_gain=link_gain,
        sensor_noise_var=np.array(doc["sensor_noise_var"], dtype=float),
        comm_noise_var=doc["comm_noise_var"],
        theta=theta,
        **common,
    )


def save_scenario(scenario, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_json_dict(scenario), fh, indent=2)
        fh.write("\n")


def load_scenario(path):
    with open(path) as fh:
        return from_json_dict(json.load(fh))
