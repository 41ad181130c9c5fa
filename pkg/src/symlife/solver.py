"""Maximum-lifetime routing as an epigraph linear program.

The min-max problem ``min_q max_i E_i(q)`` becomes ``min t`` subject to
``E_i(q) <= t`` for every sensor, per-sensor flow conservation, and ``q >= 0``
on sensor rows (collectors never transmit).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, ValidationError
from .model import NetworkInstance, validate_instance
from .simplex import simplex

EPS_OPT = 1e-9


@dataclass(frozen=True, eq=False)
class Solution:
    flow: np.ndarray
    objective: float
    energies: np.ndarray
    intake: np.ndarray
    prices: np.ndarray | None = None
    iterations: int = 0

    @property
    def K(self) -> int:
        return self.intake.shape[0]

    @property
    def sensor_energies(self) -> np.ndarray:
        return self.energies[self.K :]


def sensor_energies(q: np.ndarray, E: np.ndarray) -> np.ndarray:
    """Per-node energy ``E_i = sum_{j != i} q_ij E_ij``."""
    q = np.asarray(q, dtype=float)
    E = np.asarray(E, dtype=float)
    if q.shape != E.shape or q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValidationError(f"flow shape {q.shape} does not match energy shape {E.shape}")
    off = ~np.eye(q.shape[0], dtype=bool)
    return np.where(off, q * E, 0.0).sum(axis=1)


def conservation_residuals(q: np.ndarray, instance: NetworkInstance) -> np.ndarray:
    """``h_i = sum_j (q_ij - q_ji) - Q_i`` for each sensor ``i``."""
    q = np.asarray(q, dtype=float)
    # pairwise net flows first, so cancelling two-cycles leaves h bit-identical
    return (q - q.T).sum(axis=1)[instance.K :] - instance.data


def make_solution(q: np.ndarray, E: np.ndarray, K: int, prices=None, iterations=0) -> Solution:
    q = np.array(q, dtype=float)
    energies = sensor_energies(q, E)
    objective = float(energies[K:].max()) if q.shape[0] > K else 0.0
    return Solution(q, objective, energies, q[:, :K].sum(axis=0), prices, iterations)


def flow_variable_count(instance: NetworkInstance) -> int:
    """Number of ``q_ij`` decision variables in the LP for ``instance``."""
    return instance.N * (instance.n - 1)


def build_lp(instance: NetworkInstance, E: np.ndarray):
    """Standard-form data ``(c, A, b, basis0, pairs)`` for the epigraph LP.

    Columns are ``q_ij`` (sensor-major, target-minor), then ``t``, then one
    slack per sensor energy row. ``basis0`` sends every sensor's own data to its
    cheapest collector, which is always feasible.
    """
    K, N, n = instance.K, instance.N, instance.n
    pairs = [(i, j) for i in range(K, n) for j in range(n) if j != i]
    nq = len(pairs)
    t_col = nq
    A = np.zeros((2 * N, nq + 1 + N))
    for col, (i, j) in enumerate(pairs):
        A[i - K, col] += 1.0
        if j >= K:
            A[j - K, col] -= 1.0
        A[N + i - K, col] = E[i, j]
    A[N:, t_col] = -1.0
    A[N:, t_col + 1 :] = np.eye(N)
    b = np.concatenate([instance.data, np.zeros(N)])
    c = np.zeros(A.shape[1])
    c[t_col] = 1.0

    col_of = {p: k for k, p in enumerate(pairs)}
    sink = [int(np.argmin(E[i, :K])) for i in range(K, n)]
    load = np.array([instance.data[s] * E[K + s, sink[s]] for s in range(N)])
    r = int(np.argmax(load)) if N else 0
    basis = [col_of[(K + s, sink[s])] for s in range(N)]
    basis.append(t_col)
    basis.extend(t_col + 1 + s for s in range(N) if s != r)
    return c, A, b, np.array(basis), pairs


def solve_max_lifetime(instance: NetworkInstance, E: np.ndarray, rule: str = "dantzig") -> Solution:
    if instance.K == 0:
        raise InfeasibleError("infeasible: no sink")
    problems = validate_instance(instance)
    if problems:
        raise ValidationError("; ".join(problems))
    E = np.asarray(E, dtype=float)
    n = instance.n
    if E.shape != (n, n):
        raise ValidationError(f"energy matrix shape {E.shape} does not match {n} nodes")
    if not np.all(np.isfinite(E)) or np.any(E < 0):
        raise ValidationError("energy matrix must be finite and nonnegative")

    c, A, b, basis, pairs = build_lp(instance, E)
    res = simplex(c, A, b, basis=basis, rule=rule, tol=1e-11)
    q = np.zeros((n, n))
    idx = np.array(pairs, dtype=int).reshape(-1, 2)
    q[idx[:, 0], idx[:, 1]] = res.x[: len(pairs)]
    q[q < 1e-13 * (1.0 + np.abs(instance.data).max(initial=0.0))] = 0.0
    prices = -res.duals[instance.N :]
    return make_solution(q, E, instance.K, prices=prices, iterations=res.iterations)


def lifetime_cycles(E0: float, solution: Solution) -> int | None:
    """Whole cycles until the busiest sensor drains ``E0``; ``None`` if unbounded."""
    if E0 < 0:
        raise ValidationError("initial energy must be nonnegative")
    if solution.objective < 0:
        raise ValidationError("objective must be nonnegative")
    if solution.objective == 0:
        return None
    return math.floor(E0 / solution.objective)
