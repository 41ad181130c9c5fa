"""Dense revised simplex for ``min c @ x  s.t.  A @ x = b, x >= 0``.

Pivoting is deterministic: Dantzig pricing with lowest-index tie breaks, and
Bland's smallest-index rule whenever a run of degenerate pivots suggests
stalling (or always, with ``rule="bland"``). Both are anti-cycling, so the
same input always follows the same pivot path.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, SolverError

logger = logging.getLogger(__name__)

REFACTOR_EVERY = 40
DEGENERATE_STREAK = 30


@dataclass
class LPResult:
    x: np.ndarray
    objective: float
    basis: np.ndarray
    duals: np.ndarray
    iterations: int


class _Revised:
    def __init__(self, A, b, c, basis, tol, rule):
        self.A, self.b, self.c = A, b, c
        self.m, self.n = A.shape
        self.basis = np.array(basis, dtype=int)
        self.tol = tol
        self.rule = rule
        self.iterations = 0
        self._refactor()

    def _refactor(self):
        B = self.A[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SolverError("singular basis matrix") from exc
        self.xB = self.Binv @ self.b
        self.xB[np.abs(self.xB) < 1e-14] = 0.0
        self._since_refactor = 0

    def duals(self):
        return self.c[self.basis] @ self.Binv

    def reduced_costs(self):
        d = self.c - self.duals() @ self.A
        d[self.basis] = 0.0
        return d

    def _entering(self, d, bland):
        scale = 1.0 + np.abs(self.c).max(initial=0.0)
        cand = np.flatnonzero(d < -self.tol * scale)
        if cand.size == 0:
            return None
        if bland:
            return int(cand[0])
        return int(cand[np.argmin(d[cand])])

    def _leaving(self, u):
        piv = self.tol * (1.0 + np.abs(u).max())
        rows = np.flatnonzero(u > piv)
        if rows.size == 0:
            return None, np.inf
        ratios = np.maximum(self.xB[rows], 0.0) / u[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * (1.0 + best)]
        # smallest basic variable index among the tied rows
        r = int(ties[np.argmin(self.basis[ties])])
        return r, max(self.xB[r], 0.0) / u[r]

    def run(self, max_iter):
        streak = 0
        while True:
            if self.iterations >= max_iter:
                raise SolverError(f"iteration limit {max_iter} reached")
            d = self.reduced_costs()
            bland = self.rule == "bland" or streak >= DEGENERATE_STREAK
            j = self._entering(d, bland)
            if j is None:
                if self._since_refactor:
                    # confirm optimality on a fresh factorization
                    self._refactor()
                    if self._entering(self.reduced_costs(), True) is not None:
                        continue
                return
            u = self.Binv @ self.A[:, j]
            r, theta = self._leaving(u)
            if r is None:
                raise SolverError("problem is unbounded")
            streak = streak + 1 if theta <= 1e-14 else 0
            self._pivot(r, j, u, theta)

    def _pivot(self, r, j, u, theta):
        self.xB -= theta * u
        self.xB[r] = theta
        self.xB[np.abs(self.xB) < 1e-14] = 0.0
        pivot_row = self.Binv[r] / u[r]
        self.Binv -= np.outer(u, pivot_row)
        self.Binv[r] = pivot_row
        self.basis[r] = j
        self.iterations += 1
        self._since_refactor += 1
        if self._since_refactor >= REFACTOR_EVERY:
            self._refactor()


def simplex(c, A_eq, b_eq, basis=None, rule="dantzig", tol=1e-10, max_iter=None) -> LPResult:
    """Minimize ``c @ x`` over ``A_eq @ x = b_eq, x >= 0``.

    ``basis`` may name ``len(b_eq)`` columns forming a primal-feasible starting
    basis; otherwise a phase-one problem with artificial columns finds one.
    Raises :class:`InfeasibleError` or :class:`SolverError` (unbounded, stalled).
    """
    if rule not in ("dantzig", "bland"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    A = np.array(A_eq, dtype=float, ndmin=2)
    b = np.array(b_eq, dtype=float).reshape(-1)
    c = np.array(c, dtype=float).reshape(-1)
    m, n = A.shape
    if b.shape[0] != m or c.shape[0] != n:
        raise ValueError("dimension mismatch between c, A_eq and b_eq")
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000

    sign, keep = np.ones(m), np.ones(m, dtype=bool)
    if basis is None:
        A, b, basis, sign, keep = _phase_one(A, b, tol, rule, max_iter)
    else:
        basis = np.asarray(basis, dtype=int)
        if basis.shape != (m,):
            raise ValueError("starting basis must name one column per row")

    lp = _Revised(A, b, c, basis, tol, rule)
    if np.any(lp.xB < -1e-9 * (1.0 + np.abs(b).max(initial=0.0))):
        raise SolverError("starting basis is not primal feasible")
    lp.run(max_iter)

    x = np.zeros(n)
    x[lp.basis] = np.maximum(lp.xB, 0.0)
    logger.debug("simplex finished after %d pivots", lp.iterations)
    # duals in terms of the caller's rows: undo sign flips, zero for dropped rows
    y = np.zeros(m)
    y[keep] = lp.duals()
    return LPResult(x, float(c @ x), lp.basis.copy(), y * sign, lp.iterations)


def _phase_one(A, b, tol, rule, max_iter):
    m, n = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    A = A * sign[:, None]
    b = b * sign
    aux = np.hstack([A, np.eye(m)])
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    lp = _Revised(aux, b, cost, np.arange(n, n + m), tol, rule)
    lp.run(max_iter)
    infeas = float(cost[lp.basis] @ lp.xB)
    if infeas > 1e-8 * (1.0 + np.abs(b).max(initial=0.0)):
        raise InfeasibleError(f"infeasible: phase-one residual {infeas:.3g}")

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if lp.basis[r] < n:
            continue
        row = lp.Binv[r] @ A
        row[lp.basis[lp.basis < n]] = 0.0
        cols = np.flatnonzero(np.abs(row) > 1e-9)
        if cols.size:
            j = int(cols[0])
            lp._pivot(r, j, lp.Binv @ aux[:, j], 0.0)
        else:
            keep[r] = False
    basis = lp.basis[keep]
    if np.any(basis >= n):
        raise SolverError("could not remove artificial columns from the basis")
    return A[keep], b[keep], basis, sign, keep
