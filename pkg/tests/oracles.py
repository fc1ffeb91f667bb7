"""Independent reference implementations used to freeze expected values.

Nothing here imports the optimizer's internals; every routine is a direct,
slow transcription of the underlying math so the package under test and
the oracle can only agree by both being right.
"""

import itertools

import numpy as np


def sphere_quadratic_max(q_tilde, n, restarts=24, iters=5000, seed=0):
    """Best value of (a;1)^H Q (a;1) over ||a||^2 = n by projected gradient.

    Many random restarts, small safeguarded step; returns the best
    objective found.  Used as the reference for the inner subproblem under
    the fixed-energy constraint.
    """
    a_mat = np.asarray(q_tilde)[:n, :n]
    b = np.asarray(q_tilde)[:n, n]
    c = float(np.real(q_tilde[n, n]))
    step = 1.0 / (np.linalg.norm(a_mat, 2) + np.linalg.norm(b) + 1.0)
    rng = np.random.default_rng(seed)

    def value(a):
        return float(np.real(a.conj() @ (a_mat @ a) + 2.0 * np.real(b.conj() @ a))) + c

    best = -np.inf
    for r in range(restarts):
        if r == 0:
            a = np.ones(n, dtype=complex)
        else:
            g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            a = g
        a = np.sqrt(n) * a / np.linalg.norm(a)
        for _ in range(iters):
            grad = a_mat @ a + b
            a_new = a + step * grad
            a_new = np.sqrt(n) * a_new / np.linalg.norm(a_new)
            if np.linalg.norm(a_new - a) < 1e-14:
                a = a_new
                break
            a = a_new
        best = max(best, value(a))
    return best


def best_quant_distance(a_hat, q_levels):
    """Min over the full Q^N grid of ||cand - a_hat|| (dense enumeration)."""
    n = len(a_hat)
    grid = np.exp(2j * np.pi * np.arange(q_levels) / q_levels)
    best = np.inf
    for combo in itertools.product(range(q_levels), repeat=n):
        cand = grid[list(combo)]
        best = min(best, float(np.linalg.norm(cand - a_hat)))
    return best


def best_select_distance(a_hat, k, mode):
    """Min distance to the K-sparse feasible set by subset enumeration.

    Per support the minimizer has a closed form: rescale the kept entries
    to energy N (mode "energy") or place constant-modulus sqrt(N/K) phases
    on them (mode "phase").
    """
    a_hat = np.asarray(a_hat, dtype=complex)
    n = len(a_hat)
    best = np.inf
    for support in itertools.combinations(range(n), k):
        s = list(support)
        cand = np.zeros(n, dtype=complex)
        if mode == "energy":
            nrm = np.linalg.norm(a_hat[s])
            if nrm > 0:
                cand[s] = np.sqrt(n) * a_hat[s] / nrm
            else:
                cand[s] = np.sqrt(n / k)
        else:
            cand[s] = np.sqrt(n / k) * np.exp(1j * np.angle(a_hat[s]))
        best = min(best, float(np.linalg.norm(cand - a_hat)))
    return best


def admm_round(values, duals, x, neighbors, rho):
    """Literal per-node transcription of the consensus update equations."""
    n = len(values)
    new_values = np.array(values, dtype=values.dtype)
    for i in range(n):
        d = len(neighbors[i])
        acc = sum(values[j] for j in neighbors[i])
        new_values[i] = (rho * d * values[i] + rho * acc - duals[i] + x[i]) / (1.0 + 2.0 * rho * d)
    new_duals = np.array(duals, dtype=duals.dtype)
    for i in range(n):
        d = len(neighbors[i])
        acc = sum(new_values[j] for j in neighbors[i])
        new_duals[i] = duals[i] + rho * (d * new_values[i] - acc)
    return new_values, new_duals


def dense_information(h_global, a, sensor_noise_var, noise_var):
    """a^H H^H R_w^{-1} H a with R_w materialized and inverted densely."""
    h = np.asarray(h_global, dtype=complex)
    a = np.asarray(a, dtype=complex)
    d = np.diag(a)
    v = np.diag(np.asarray(sensor_noise_var, dtype=float))
    r_w = h @ d @ v @ d.conj().T @ h.conj().T + noise_var * np.eye(h.shape[0])
    ha = h @ a
    return float(np.real(ha.conj() @ np.linalg.solve(r_w, ha)))
