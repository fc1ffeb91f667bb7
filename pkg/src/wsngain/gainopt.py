"""Sensor gain optimization by cyclic over-parametrization.

The estimation variance is minimized by lifting the objective into a
bordered matrix R whose corner hosts a large constant eta0.  Alternating
between an exact auxiliary solve (first column of R^{-1}, rescaled) and
power-method-like iterations on a shifted quadratic drives eta = eta0 -
(information value) monotonically down under any of four practical
constraint families.  A simplified unimodular-quadratic path handles the
phase-only case with a constant matrix.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .diffusion import GlobalModel, decentralized_model
from .errors import (
    Eta0TooSmall,
    InvalidConfig,
    NoDescent,
    ZeroVectorWarning,
)
from .estimator import GainVector, _information_and_weights, global_variance
from .scenario import DecentralizedScenario

LAMBDA_FLOOR = 1e-12
INNER_STOP = 1e-10
DESCENT_RTOL = 1e-9


@dataclass(frozen=True)
class ConstraintSpec:
    """One of the four feasible sets for the gain vector.

    kind "energy":  ||a||^2 = N
    kind "phase":   |a_i| = 1 for all i
    kind "quant":   a_i in {e^{j 2 pi q / Q}}, q_levels = Q >= 2
    kind "select":  at most k_active nonzeros; select_mode "energy" keeps
                    ||a||^2 = N, select_mode "phase" uses constant modulus
                    sqrt(N / K) on the support
    """

    kind: str
    q_levels: int | None = None
    k_active: int | None = None
    select_mode: str = "energy"

    def __post_init__(self):
        if self.kind not in ("energy", "phase", "quant", "select"):
            raise InvalidConfig(f"unknown constraint kind {self.kind!r}")
        if self.kind == "quant" and (self.q_levels is None or self.q_levels < 2):
            raise InvalidConfig("quantized constraint needs q_levels >= 2")
        if self.kind == "select":
            if self.k_active is None or self.k_active < 1:
                raise InvalidConfig("selection constraint needs k_active >= 1")
            if self.select_mode not in ("energy", "phase"):
                raise InvalidConfig(f"unknown selection mode {self.select_mode!r}")

    @classmethod
    def fixed_energy(cls):
        return cls("energy")

    @classmethod
    def phase_only(cls):
        return cls("phase")

    @classmethod
    def quantized(cls, q_levels: int):
        return cls("quant", q_levels=q_levels)

    @classmethod
    def sensor_select(cls, k_active: int, mode: str = "energy"):
        return cls("select", k_active=k_active, select_mode=mode)

    @classmethod
    def parse(cls, text: str) -> "ConstraintSpec":
        """Parse CLI syntax: energy | phase | quant:Q | select:K[:phase]."""
        parts = text.split(":")
        if parts[0] == "energy" and len(parts) == 1:
            return cls.fixed_energy()
        if parts[0] == "phase" and len(parts) == 1:
            return cls.phase_only()
        if parts[0] == "quant" and len(parts) == 2:
            return cls.quantized(int(parts[1]))
        if parts[0] == "select" and len(parts) in (2, 3):
            mode = parts[2] if len(parts) == 3 else "energy"
            return cls.sensor_select(int(parts[1]), mode)
        raise InvalidConfig(f"cannot parse constraint {text!r}")

    def label(self) -> str:
        if self.kind == "quant":
            return f"quant:{self.q_levels}"
        if self.kind == "select":
            return f"select:{self.k_active}:{self.select_mode}"
        return self.kind

    def check(self, values: np.ndarray, atol: float = 1e-9) -> None:
        """Raise InvalidConfig unless the values satisfy the constraint."""
        a = np.asarray(values, dtype=complex)
        n = len(a)
        if self.kind == "energy":
            if abs(np.sum(np.abs(a) ** 2) - n) > atol * n:
                raise InvalidConfig("gain energy differs from N")
            return
        if self.kind == "phase":
            if np.max(np.abs(np.abs(a) - 1.0)) > atol:
                raise InvalidConfig("gains are not unit modulus")
            return
        if self.kind == "quant":
            grid = np.exp(2j * np.pi * np.arange(self.q_levels) / self.q_levels)
            dist = np.min(np.abs(a[:, None] - grid[None, :]), axis=1)
            if np.max(dist) > atol:
                raise InvalidConfig("gains are off the phase grid")
            return
        support = np.flatnonzero(np.abs(a) > atol)
        if len(support) > self.k_active:
            raise InvalidConfig("more active sensors than allowed")
        if self.select_mode == "energy":
            if abs(np.sum(np.abs(a) ** 2) - n) > atol * n:
                raise InvalidConfig("gain energy differs from N")
        else:
            want = np.sqrt(n / self.k_active)
            if len(support) and np.max(np.abs(np.abs(a[support]) - want)) > atol:
                raise InvalidConfig("active gains are not constant modulus")

    def initial_point(self, n: int) -> np.ndarray:
        """Feasible projection of the all-ones vector (deterministic start)."""
        return project(np.ones(n, dtype=complex), self)

    def random_point(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform draw on the feasible set (restart initialization).

        Phases are uniform; energies come from a normalized complex
        Gaussian; selection supports are uniform K-subsets.
        """
        if self.kind == "energy":
            g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            return np.sqrt(n) * g / np.linalg.norm(g)
        if self.kind == "phase":
            return np.exp(2j * np.pi * rng.random(n))
        if self.kind == "quant":
            q = rng.integers(0, self.q_levels, n)
            return np.exp(2j * np.pi * q / self.q_levels)
        support = rng.choice(n, size=min(self.k_active, n), replace=False)
        a = np.zeros(n, dtype=complex)
        if self.select_mode == "energy":
            g = rng.standard_normal(len(support)) + 1j * rng.standard_normal(len(support))
            a[support] = np.sqrt(n) * g / np.linalg.norm(g)
        else:
            a[support] = np.sqrt(n / self.k_active) * np.exp(2j * np.pi * rng.random(len(support)))
        return a


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of the cyclic optimizer.

    eta0_margin and lambda_margin multiply the corner-constant bound and
    the largest-eigenvalue estimate; inner_iters caps the power-method-like
    iterations per outer cycle; outer iterations stop once |eta_k -
    eta_{k+1}| <= outer_tol.
    """

    eta0_margin: float = 1.1
    lambda_margin: float = 1.05
    inner_iters: int = 50
    outer_tol: float = 1e-8
    max_outer: int = 200
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.eta0_margin <= 1 or self.lambda_margin <= 1:
            raise InvalidConfig("margins must exceed 1")
        if self.inner_iters < 1 or self.max_outer < 1 or self.restarts < 1:
            raise InvalidConfig("iteration counts must be positive")
        if self.outer_tol <= 0:
            raise InvalidConfig("outer tolerance must be positive")


@dataclass(frozen=True)
class OptimizerTrace:
    """Full record of one optimization run (best restart)."""

    eta_per_outer: tuple[float, ...]
    inner_objective: tuple[float, ...]
    final_gains: GainVector = field(repr=False)
    final_variance: float
    wall_time_s: float
    restart_index: int = 0
    segment_breaks: tuple[int, ...] = ()
    stationarity_residual: float = 0.0
    inner_segments: tuple[int, ...] = ()

    @property
    def outer_iters(self) -> int:
        return len(self.eta_per_outer)

    def inner_objective_runs(self):
        """The inner objective split back into one sequence per outer cycle."""
        runs, start = [], 0
        for length in self.inner_segments:
            runs.append(self.inner_objective[start:start + length])
            start += length
        return runs

    @property
    def inner_iters_total(self) -> int:
        return len(self.inner_objective)


def eta0_bound(model: GlobalModel, margin: float = 1.1) -> float:
    """Corner constant keeping eta positive: margin * N ||H||_F^2 / sigma_n^2."""
    n = model.num_sensors
    return margin * n * float(np.linalg.norm(model.H, "fro") ** 2) / model.noise_var


def build_lifted(model: GlobalModel, gains, eta0: float) -> np.ndarray:
    """Bordered Hermitian matrix R = [[eta0, (Ha)^H], [Ha, H D V D^H H^H + sigma_n^2 I]]."""
    a = np.asarray(getattr(gains, "values", gains), dtype=complex)
    m = model.num_rows
    b = model.H @ a
    core = (model.H * (np.abs(a) ** 2 * model.sensor_noise_var)[None, :]) @ model.H.conj().T
    core += model.noise_var * np.eye(m)
    r = np.zeros((m + 1, m + 1), dtype=complex)
    r[0, 0] = eta0
    r[0, 1:] = b.conj()
    r[1:, 0] = b
    r[1:, 1:] = core
    return r


def solve_auxiliary(r: np.ndarray) -> np.ndarray:
    """Auxiliary vector y with y_1 = 1, proportional to R^{-1} e_1.

    Orthonormalizes the conjugated rows 2..M+1 of R (modified Gram-Schmidt
    with one re-orthogonalization pass) and projects e_1 onto their
    orthogonal complement; that residual is proportional to R^{-1} e_1
    because R y must vanish on every border row.  Falls back to a direct
    solve when the residual nearly vanishes (near-singular lift).
    """
    m1 = r.shape[0]
    basis = []
    for i in range(1, m1):
        u = r[i, :].conj().copy()
        for _ in range(2):  # re-orthogonalize for numerical safety
            for q in basis:
                u -= (q.conj() @ u) * q
        nrm = np.linalg.norm(u)
        if nrm > 0:
            basis.append(u / nrm)
    e1 = np.zeros(m1, dtype=complex)
    e1[0] = 1.0
    res = e1.copy()
    for q in basis:
        res -= (q.conj() @ e1) * q
    if np.linalg.norm(res) < 1e-12 * np.linalg.norm(r):
        y = np.linalg.solve(r, e1)
    else:
        y = res
    return y / y[0]


def build_inner_quadratic(y_tail: np.ndarray, model: GlobalModel, eta0: float):
    """Arrow matrix Q and constant C1 with y^H R y = C1 + (a;1)^H Q (a;1).

    For diagonal V the Hadamard product (H^H y y^H H) o V collapses to the
    diagonal |H^H y|^2 v; C1 = eta0 + sigma_n^2 ||y_tail||^2.
    """
    yt = np.asarray(y_tail, dtype=complex)
    g = model.H.conj().T @ yt
    n = model.num_sensors
    q = np.zeros((n + 1, n + 1), dtype=complex)
    q[:n, :n] = np.diag(np.abs(g) ** 2 * model.sensor_noise_var)
    q[:n, n] = g
    q[n, :n] = g.conj()
    c1 = eta0 + model.noise_var * float(np.real(yt.conj() @ yt))
    return q, c1


def shift_quadratic(q: np.ndarray, margin: float = 1.05, power_iters: int = 100):
    """Positive-definite shift Q~ = lambda I - Q with lambda > lambda_max(Q).

    lambda is margin times a power-iteration estimate of the largest
    eigenvalue (run on Q + ||Q||_F I so the dominant eigenvalue is the
    algebraic maximum, then de-shifted).  When the estimate is not
    positive, a small floor keeps Q~ well defined; ||Q||_F itself bounds
    the spectral radius and serves as the certified fallback.
    """
    n = q.shape[0]
    fro = float(np.linalg.norm(q, "fro"))
    if fro == 0.0:
        lam = LAMBDA_FLOOR
        return lam * np.eye(n, dtype=complex), lam
    # deterministic start with a mild ramp so it is never orthogonal
    # to the top eigenspace by symmetry
    b = (1.0 + 0.01 * np.arange(n)).astype(complex)
    b /= np.linalg.norm(b)
    shifted = q + fro * np.eye(n, dtype=complex)
    rayleigh = 0.0
    for _ in range(power_iters):
        nb = shifted @ b
        nrm = np.linalg.norm(nb)
        if nrm == 0.0:
            break
        b = nb / nrm
        rayleigh = float(np.real(b.conj() @ (shifted @ b)))
    est = rayleigh - fro
    lam = margin * est if est > 0 else LAMBDA_FLOOR * max(1.0, fro)
    return lam * np.eye(n, dtype=complex) - q, lam


def _quantize_phases(angles: np.ndarray, q_levels: int) -> np.ndarray:
    """Nearest grid phase 2 pi q / Q; exact midpoints round to the smaller
    phase value."""
    ang = np.mod(angles, 2.0 * np.pi)
    frac = ang * q_levels / (2.0 * np.pi)
    lo = np.floor(frac)
    rem = frac - lo
    pick = np.where(rem < 0.5, lo, lo + 1)
    tie = rem == 0.5
    if np.any(tie):
        low = np.mod(lo, q_levels)
        high = np.mod(lo + 1, q_levels)
        pick = np.where(tie, np.minimum(low, high), pick)
    return 2.0 * np.pi * np.mod(pick, q_levels) / q_levels


def project(a_hat: np.ndarray, constraint: ConstraintSpec) -> np.ndarray:
    """Nearest feasible point to a_hat (ties and degeneracies deterministic).

    energy: sqrt(N) a_hat / ||a_hat||
    phase: e^{j arg a_hat} entrywise
    quant: nearest grid phase, midpoint ties to the smaller phase value
    select: keep the K largest magnitudes (rank ties keep the lower
    index), then rescale (energy) or apply constant modulus (phase)

    A zero input under the energy or select-energy family has no unique
    nearest point; a deterministic feasible point is returned and a
    ZeroVectorWarning is issued.
    """
    a = np.asarray(a_hat, dtype=complex)
    n = len(a)
    if constraint.kind == "energy":
        nrm = np.linalg.norm(a)
        if nrm == 0.0:
            warnings.warn("zero vector projected onto the energy sphere", ZeroVectorWarning)
            return np.ones(n, dtype=complex)
        return np.sqrt(n) * a / nrm
    if constraint.kind == "phase":
        return np.exp(1j * np.angle(a))
    if constraint.kind == "quant":
        return np.exp(1j * _quantize_phases(np.angle(a), constraint.q_levels))
    k = constraint.k_active
    mags = np.abs(a)
    order = np.lexsort((np.arange(n), -mags))  # descending magnitude, low index first
    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    if constraint.select_mode == "energy":
        kept = np.where(mask, a, 0.0)
        nrm = np.linalg.norm(kept)
        if nrm == 0.0:
            warnings.warn("zero vector projected onto the selection set", ZeroVectorWarning)
            out = np.zeros(n, dtype=complex)
            out[:k] = np.sqrt(n / k)
            return out
        return np.sqrt(n) * kept / nrm
    out = np.zeros(n, dtype=complex)
    out[mask] = np.sqrt(n / k) * np.exp(1j * np.angle(a[mask]))
    return out


def _lifted_point(a: np.ndarray) -> np.ndarray:
    return np.concatenate([a, [1.0 + 0.0j]])


def inner_power_iterations(a0: np.ndarray, q_tilde: np.ndarray, constraint: ConstraintSpec,
                           max_iters: int, stop_tol: float = INNER_STOP):
    """Power-method-like ascent a <- project((I_N 0) Q~ (a;1)).

    Returns (a, objectives) where objectives holds (a;1)^H Q~ (a;1) at the
    start and after every accepted step; the sequence is non-decreasing
    for any positive-semidefinite Q~.
    """
    n = len(a0)
    a = np.asarray(a0, dtype=complex).copy()
    z = _lifted_point(a)
    objs = [float(np.real(z.conj() @ (q_tilde @ z)))]
    for _ in range(max_iters):
        image = (q_tilde @ z)[:n]
        a_new = project(image, constraint)
        if np.linalg.norm(a_new - a) <= stop_tol:
            break
        a = a_new
        z = _lifted_point(a)
        objs.append(float(np.real(z.conj() @ (q_tilde @ z))))
    return a, objs


def _nondecreasing(seq, rtol=DESCENT_RTOL) -> bool:
    for prev, cur in zip(seq, seq[1:]):
        if cur < prev - rtol * max(1.0, abs(prev)):
            return False
    return True


def _models_match(m1: GlobalModel, m2: GlobalModel) -> bool:
    return m1.noise_map == m2.noise_map and np.array_equal(m1.H, m2.H)


@dataclass(frozen=True)
class _RunRecord:
    gains: np.ndarray
    etas: tuple[float, ...]
    inner_objs: tuple[float, ...]
    inner_segments: tuple[int, ...]
    variance: float
    breaks: tuple[int, ...]
    stationarity_residual: float


def _cyclic_run(model, model_fn, a0, constraint, config):
    """One full cyclic minimization from a0; returns the per-run record.

    Each outer cycle solves the auxiliary vector exactly first, so the
    eta trace is anchored at eta(a0) and descends monotonically;
    the gain update then runs the shifted power iterations.  If the inner
    objective ever decreases (an eigenvalue estimate fell short), the
    cycle retries once with the certified Frobenius shift.
    """
    m = model_fn(a0) if model_fn is not None else model
    eta0 = eta0_bound(m, config.eta0_margin)
    a = np.asarray(a0, dtype=complex).copy()
    etas: list[float] = []
    inner_objs: list[float] = []
    seg_lens: list[int] = []
    breaks: list[int] = []
    prev = None
    stat_resid = 0.0
    for k in range(config.max_outer):
        if model_fn is not None and k > 0:
            m_new = model_fn(a)
            if not _models_match(m, m_new):
                # compression plan changed: new objective segment
                m = m_new
                eta0 = eta0_bound(m, config.eta0_margin)
                prev = None
                breaks.append(k)
        r = build_lifted(m, a, eta0)
        y = solve_auxiliary(r)
        eta = float(np.real(y.conj() @ (r @ y)))
        if eta <= 0:
            raise Eta0TooSmall(f"eta = {eta} <= 0; corner constant too small")
        # the exact solve must land on the minimum value eta0 - info(a)
        info, _ = _information_and_weights(m, a)
        stat_resid = max(stat_resid, abs(eta - (eta0 - info)) / abs(eta))
        etas.append(eta)
        if prev is not None:
            if eta > prev + DESCENT_RTOL * abs(prev):
                raise NoDescent(f"eta rose from {prev} to {eta}")
            if abs(prev - eta) <= config.outer_tol:
                break
        prev = eta
        q, _ = build_inner_quadratic(y[1:], m, eta0)
        q_tilde, _ = shift_quadratic(q, config.lambda_margin)
        a_new, objs = inner_power_iterations(a, q_tilde, constraint, config.inner_iters)
        if not _nondecreasing(objs):
            # certified fallback: the Frobenius norm bounds the spectral radius
            lam = config.lambda_margin * float(np.linalg.norm(q, "fro"))
            q_tilde = lam * np.eye(q.shape[0], dtype=complex) - q
            a_new, objs = inner_power_iterations(a, q_tilde, constraint, config.inner_iters)
            if not _nondecreasing(objs):
                raise NoDescent("inner objective decreased under the certified shift")
        inner_objs.extend(objs)
        seg_lens.append(len(objs))
        a = a_new
    return _RunRecord(a, tuple(etas), tuple(inner_objs), tuple(seg_lens),
                      global_variance(m, a), tuple(breaks), stat_resid)


def _restart_points(n, constraint, config, model, model_fn):
    """Initialization schedule: deterministic start, then random feasible draws.

    For quantized phases the second start is the solved phase-only
    relaxation projected onto the grid; rounding the continuous optimum
    reaches grid points that random draws and the frozen-phase iterations
    rarely find.
    """
    points = [constraint.initial_point(n)]
    if constraint.kind == "quant" and config.restarts > 1:
        relax_model = model_fn(points[0]) if model_fn is not None else model
        relaxed, _ = optimize_phase_only_uqp(relax_model, config)
        points.append(project(relaxed.values, constraint))
    r = len(points)
    while len(points) < config.restarts:
        rng = np.random.default_rng((config.seed, r))
        points.append(constraint.random_point(n, rng))
        r += 1
    return points[: config.restarts]


def optimize(model: GlobalModel, constraint: ConstraintSpec,
             config: OptimizerConfig = OptimizerConfig(),
             model_fn=None) -> tuple[GainVector, OptimizerTrace]:
    """Minimize estimation variance over the constrained gain vector.

    Parameters
    ----------
    model : GlobalModel
        Observation model (sizes the problem and serves as the first
        segment when no factory is given).
    constraint : ConstraintSpec
        Feasible set for the gains.
    config : OptimizerConfig
        Margins, iteration budgets, stop tolerance, restarts, seed.
    model_fn : callable, optional
        gains -> GlobalModel, re-evaluated per outer iteration for models
        that depend on the gains (decentralized plan refresh).

    Returns
    -------
    (GainVector, OptimizerTrace)
        Best gains over all restarts (lexicographic on (variance,
        restart index) for determinism) and the winning run's trace.

    Notes
    -----
    The variance at the returned gains never exceeds the variance at the
    deterministic starting point: the first outer cycle computes the
    auxiliary vector for a0 before any gain update, and every cycle
    decreases eta.
    """
    n = model.num_sensors
    t0 = time.perf_counter()
    best_key, best_run = None, None
    for idx, a0 in enumerate(_restart_points(n, constraint, config, model, model_fn)):
        run = _cyclic_run(model, model_fn, a0, constraint, config)
        key = (run.variance, idx)
        if best_key is None or key < best_key:
            best_key, best_run = key, run
    wall = time.perf_counter() - t0
    gains = GainVector(best_run.gains, constraint)
    trace = OptimizerTrace(
        eta_per_outer=best_run.etas,
        inner_objective=best_run.inner_objs,
        final_gains=gains,
        final_variance=best_run.variance,
        wall_time_s=wall,
        restart_index=best_key[1],
        segment_breaks=best_run.breaks,
        stationarity_residual=best_run.stationarity_residual,
        inner_segments=best_run.inner_segments,
    )
    return gains, trace


def refine(model: GlobalModel, a0, constraint: ConstraintSpec,
           config: OptimizerConfig = OptimizerConfig(),
           model_fn=None) -> tuple[GainVector, OptimizerTrace]:
    """Single cyclic run from a caller-provided feasible start (warm start).

    Useful when one constraint family's solution is feasible for a looser
    one; monotone descent then guarantees the refined variance does not
    exceed the warm start's.
    """
    a0 = np.asarray(a0, dtype=complex)
    constraint.check(a0)
    t0 = time.perf_counter()
    run = _cyclic_run(model, model_fn, a0, constraint, config)
    gains = GainVector(run.gains, constraint)
    trace = OptimizerTrace(
        eta_per_outer=run.etas,
        inner_objective=run.inner_objs,
        final_gains=gains,
        final_variance=run.variance,
        wall_time_s=time.perf_counter() - t0,
        segment_breaks=run.breaks,
        stationarity_residual=run.stationarity_residual,
        inner_segments=run.inner_segments,
    )
    return gains, trace


def optimize_decentralized(scenario: DecentralizedScenario, constraint: ConstraintSpec,
                           config: OptimizerConfig = OptimizerConfig(),
                           refresh_plan: bool = True):
    """Gain design over a decentralized scenario.

    The compressed model depends on the gains through the carrier
    assignment; by default it is recomputed every outer iteration
    (refresh_plan=False freezes the plan of the starting point).
    Returns (gains, trace, plan) with the plan matching the final gains.
    """
    if refresh_plan:
        model_fn = lambda a: decentralized_model(scenario, a)[0]  # noqa: E731
        start_model, _ = decentralized_model(scenario, constraint.initial_point(scenario.num_sensors))
        gains, trace = optimize(start_model, constraint, config, model_fn=model_fn)
    else:
        start_model, _ = decentralized_model(scenario, constraint.initial_point(scenario.num_sensors))
        gains, trace = optimize(start_model, constraint, config)
    _, plan = decentralized_model(scenario, gains)
    return gains, trace, plan


def uqp_matrix(model: GlobalModel) -> np.ndarray:
    """Constant matrix of the phase-only program: B = H^H (H V H^H + M)^{-1} H.

    Valid because V is diagonal and |a_i| = 1 makes D V D^H = V, so the
    combined covariance no longer depends on the gains.
    """
    core = (model.H * model.sensor_noise_var[None, :]) @ model.H.conj().T
    core += model.noise_var * np.eye(model.num_rows)
    return model.H.conj().T @ np.linalg.solve(core, model.H)


def uqp_step(b_mat: np.ndarray, a: np.ndarray) -> np.ndarray:
    """One unimodular ascent step a <- e^{j arg(B a)}.

    Non-decreasing in a^H B a for positive semidefinite B: the step
    maximizes Re(z^H B a) over unit-modulus z.
    """
    return np.exp(1j * np.angle(b_mat @ np.asarray(a, dtype=complex)))


def optimize_phase_only_uqp(model: GlobalModel,
                            config: OptimizerConfig = OptimizerConfig()
                            ) -> tuple[GainVector, OptimizerTrace]:
    """Phase-only design via the unimodular quadratic program.

    Builds B once and iterates a <- e^{j arg(B a)}; the objective a^H B a
    is non-decreasing because B is positive semidefinite.  The eta trace
    is reported as eta0 - objective so traces are comparable with the
    general path.
    """
    t0 = time.perf_counter()
    b_mat = uqp_matrix(model)
    n = model.num_sensors
    eta0 = eta0_bound(model, config.eta0_margin)
    constraint = ConstraintSpec.phase_only()
    max_iters = config.max_outer * config.inner_iters
    best = None
    for ridx in range(config.restarts):
        if ridx == 0:
            a = np.ones(n, dtype=complex)
        else:
            rng = np.random.default_rng((config.seed, ridx))
            a = constraint.random_point(n, rng)
        objs = [float(np.real(a.conj() @ (b_mat @ a)))]
        for _ in range(max_iters):
            a_new = uqp_step(b_mat, a)
            step = np.linalg.norm(a_new - a)
            a = a_new
            objs.append(float(np.real(a.conj() @ (b_mat @ a))))
            if step <= INNER_STOP:
                break
        variance = 1.0 / objs[-1]
        key = (variance, ridx)
        if best is None or key < best[0]:
            best = (key, a, objs)
    _, a, objs = best
    wall = time.perf_counter() - t0
    gains = GainVector(a, constraint)
    trace = OptimizerTrace(
        eta_per_outer=tuple(eta0 - o for o in objs),
        inner_objective=tuple(objs),
        final_gains=gains,
        final_variance=best[0][0],
        wall_time_s=wall,
        restart_index=best[0][1],
    )
    return gains, trace
