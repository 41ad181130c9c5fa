"""Post-processing of optimal flows: conjugation, group averaging, invariance
checks, two-cycle cancellation and removal of intra-orbit traffic."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .symmetry import GroupElement, OrbitPartition, SymmetryGroup

INVARIANCE_TOL = 1e-9


@dataclass(frozen=True)
class InvarianceReport:
    max_violation: float
    is_invariant: bool
    tol: float


def conjugate_flow(g: GroupElement, q: np.ndarray) -> np.ndarray:
    """Relabel ``q`` by ``g``: the result satisfies ``r[g(i), g(j)] == q[i, j]``."""
    q = np.asarray(q, dtype=float)
    perm = np.asarray(g.perm)
    if q.ndim != 2 or q.shape != (len(perm), len(perm)):
        raise ValidationError(f"flow shape {q.shape} does not match permutation of size {len(perm)}")
    r = np.empty_like(q)
    r[np.ix_(perm, perm)] = q
    return r


def weighted_average(q0: np.ndarray, group: SymmetryGroup, weights) -> np.ndarray:
    """``sum_m w_m g_m q0 g_m^-1 / sum_m w_m`` over the group elements in order."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (group.order,) or np.any(w < 0) or w.sum() <= 0:
        raise ValidationError("weights must be nonnegative, one per element, with positive sum")
    total = np.zeros_like(np.asarray(q0, dtype=float))
    for wm, g in zip(w, group.elements):
        if wm:
            total += wm * conjugate_flow(g, q0)
    return total / w.sum()


def symmetrize(q0: np.ndarray, group: SymmetryGroup) -> np.ndarray:
    """Uniform group average of the conjugates of ``q0``.

    Each entry sums the same multiset of values as every entry in its orbit;
    sorting the stack first makes the summation order, and so the rounding,
    identical across an orbit. The result is exactly invariant.
    """
    stack = np.stack([conjugate_flow(g, q0) for g in group.elements])
    stack.sort(axis=0)
    return stack.sum(axis=0) / group.order


def check_invariance(q: np.ndarray, group: SymmetryGroup, tol: float = INVARIANCE_TOL) -> InvarianceReport:
    q = np.asarray(q, dtype=float)
    worst = 0.0
    for g in group.elements:
        perm = np.asarray(g.perm)
        if q.shape != (len(perm), len(perm)):
            raise ValidationError(f"flow shape {q.shape} does not match group of degree {len(perm)}")
        worst = max(worst, float(np.max(np.abs(q[np.ix_(perm, perm)] - q), initial=0.0)))
    return InvarianceReport(worst, worst <= tol, tol)


def cancel_pairwise(q: np.ndarray, K: int | None = None) -> np.ndarray:
    """Remove two-cycles: ``min(q_ij, q_ji)`` comes off both directions.

    Net flow through every node is unchanged. ``K`` (collector count) limits
    the pass to sensor pairs; collector rows are zero anyway.
    """
    q = np.array(q, dtype=float)
    both = np.minimum(q, q.T)
    if K:
        both[:K, :] = 0.0
        both[:, :K] = 0.0
    np.fill_diagonal(both, 0.0)
    out = q - both
    # exact zero on the weaker side even when rounding leaves a residue
    out[both == q] = 0.0
    return out


def remove_intra_orbit(
    q: np.ndarray, partition: OrbitPartition, group: SymmetryGroup, tol: float = INVARIANCE_TOL
) -> np.ndarray:
    """Zero all traffic between sensors of the same orbit.

    For an invariant flow the amount a node sends inside its orbit equals what
    it receives from that orbit, so conservation survives the cut.
    """
    report = check_invariance(q, group, tol)
    if not report.is_invariant:
        raise ValidationError(
            f"requires invariant flow (max violation {report.max_violation:.3g} > {tol:g})"
        )
    out = np.array(q, dtype=float)
    for orb in partition.orbits:
        idx = np.asarray(orb)
        out[np.ix_(idx, idx)] = 0.0
    return out


def canonicalize(q0: np.ndarray, group: SymmetryGroup, partition: OrbitPartition, K: int) -> np.ndarray:
    """symmetrize, then drop intra-orbit traffic, then cancel two-cycles."""
    q = symmetrize(q0, group)
    q = remove_intra_orbit(q, partition, group)
    return cancel_pairwise(q, K)


def route_to_nearest_collector(q: np.ndarray, points: np.ndarray, K: int) -> np.ndarray:
    """Send each sensor's collector-bound traffic to its closest collector.

    Collectors impose no conservation, so this never breaks feasibility, and
    with distance-monotone costs no sensor energy goes up. Ties go to the
    lowest collector index.
    """
    q = np.array(q, dtype=float)
    pts = np.asarray(points, dtype=float)
    if K == 0:
        return q
    for i in range(K, q.shape[0]):
        total = q[i, :K].sum()
        if total == 0.0:
            continue
        d = np.hypot(*(pts[:K] - pts[i]).T)
        best = d.min()
        k = int(np.flatnonzero(d <= best + 1e-9 * (1.0 + best))[0])
        q[i, :K] = 0.0
        q[i, k] = total
    return q
