"""Solve a symmetric problem on one fundamental region and replicate it.

For dihedral groups the region is the open chamber between two adjacent
mirrors plus the collectors on its bounding half-lines. For rotation groups it
is the nearest-neighbour transversal grown from one seed node, usable only
when it is closed under nearest routing.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .canonical import check_invariance, route_to_nearest_collector
from .errors import ReductionError
from .geometry import EPS_GEO, TWO_PI, angular_offset, pairwise_distances
from .model import NetworkInstance, check_monotone
from .solver import (
    Solution,
    conservation_residuals,
    flow_variable_count,
    make_solution,
    solve_max_lifetime,
)
from .symmetry import (
    FundamentalRegion,
    OrbitPartition,
    SymmetryGroup,
    fundamental_region,
    orbits,
)


@dataclass(frozen=True, eq=False)
class ReducedInstance:
    base: NetworkInstance
    energy: np.ndarray
    index_map: tuple[int, ...]
    group: SymmetryGroup
    region: FundamentalRegion
    full: NetworkInstance
    full_energy: np.ndarray


def _invariance_error(E: np.ndarray, instance: NetworkInstance, group: SymmetryGroup) -> float:
    q = instance.node_data
    worst = 0.0
    for g in group.elements:
        p = np.asarray(g.perm)
        worst = max(worst, float(np.max(np.abs(E[np.ix_(p, p)] - E) / (1.0 + np.abs(E)))))
        worst = max(worst, float(np.max(np.abs(q[p] - q) / (1.0 + np.abs(q)), initial=0.0)))
    return worst


def working_group(group: SymmetryGroup, rotation_only: bool) -> SymmetryGroup:
    if rotation_only and group.kind == "dihedral":
        return group.rotations()
    return group


def reduce_instance(
    instance: NetworkInstance,
    E: np.ndarray,
    group: SymmetryGroup,
    region: FundamentalRegion | None = None,
    rotation_only: bool = False,
    allow_nonoptimal: bool = False,
) -> ReducedInstance:
    group = working_group(group, rotation_only)
    E = np.asarray(E, dtype=float)
    if _invariance_error(E, instance, group) > 1e-9:
        raise ReductionError("energy matrix or data volumes are not invariant under the group")
    if not check_monotone(E, instance):
        raise ReductionError("energy matrix is not monotone in distance")
    if region is None:
        region = fundamental_region(group, instance)
    if not region.optimal and not allow_nonoptimal:
        raise ReductionError("fundamental region is not closed under nearest routing")

    K = instance.K
    keep = region.all_nodes
    cols = [i for i in keep if i < K]
    sens = [i for i in keep if i >= K]
    if not cols:
        raise ReductionError("reduced problem has no sink")
    index_map = tuple(cols + sens)
    pts = instance.points
    base = NetworkInstance(
        pts[cols],
        pts[sens],
        instance.node_data[sens],
        instance.energy_model,
    )
    idx = np.asarray(index_map)
    return ReducedInstance(base, E[np.ix_(idx, idx)], index_map, group, region, instance, E)


def lift_solution(reduced_solution: Solution, reduced: ReducedInstance) -> Solution:
    """Copy the reduced flow onto every group image of the region."""
    n = reduced.full.n
    q = np.zeros((n, n))
    idx = np.asarray(reduced.index_map)
    qr = np.asarray(reduced_solution.flow)
    for g in reduced.group.elements:
        img = np.asarray(g.perm)[idx]
        q[np.ix_(img, img)] = qr
    return make_solution(q, reduced.full_energy, reduced.full.K)


def solve_reduced(reduced: ReducedInstance) -> tuple[Solution, Solution]:
    """Reduced optimum (sinks moved to nearest collectors) and its lift."""
    sol = solve_max_lifetime(reduced.base, reduced.energy)
    q = route_to_nearest_collector(sol.flow, reduced.base.points, reduced.base.K)
    sol = make_solution(q, reduced.energy, reduced.base.K, sol.prices, sol.iterations)
    return sol, lift_solution(sol, reduced)


# ---------------------------------------------------------------- audits


def _angle_tol(r: float) -> float:
    return EPS_GEO / max(r, EPS_GEO) + 1e-12


def mirror_crossings(q: np.ndarray, instance: NetworkInstance, group: SymmetryGroup) -> int:
    """Edges carrying flow between points strictly on opposite sides of a mirror."""
    if group.kind != "dihedral":
        return 0
    r, theta = group.local_polar(instance.points)
    eps = group.tol
    count = 0
    src, dst = np.nonzero(q > 0)
    for k in range(group.M):
        phi = k * math.pi / group.M
        side = r * np.sin(theta - phi)
        side = np.where(np.abs(side) <= eps, 0.0, np.sign(side))
        count += int(np.sum(side[src] * side[dst] < 0))
    return count


def nearest_collector_violations(q: np.ndarray, instance: NetworkInstance) -> int:
    K = instance.K
    d = pairwise_distances(instance.points)[:, :K]
    best = d.min(axis=1)
    bad = 0
    for i, k in zip(*np.nonzero(q[:, :K] > 0)):
        if d[i, k] > best[i] + EPS_GEO * (1.0 + best[i]):
            bad += 1
    return bad


def orbit_nearest_violations(q: np.ndarray, instance: NetworkInstance, partition: OrbitPartition) -> int:
    """Inter-orbit edges whose target is not a closest member of its orbit."""
    d = pairwise_distances(instance.points)
    bad = 0
    for i, j in zip(*np.nonzero(q > 0)):
        oi, oj = partition.labels[i][0], partition.labels[j][0]
        if oi == oj:
            continue
        best = d[i, list(partition.orbits[oj])].min()
        if d[i, j] > best + EPS_GEO * (1.0 + best):
            bad += 1
    return bad


def intra_orbit_flow(q: np.ndarray, instance: NetworkInstance, partition: OrbitPartition) -> float:
    total = 0.0
    for orb in partition.orbits:
        sens = [i for i in orb if i >= instance.K]
        if len(sens) > 1:
            total += float(np.abs(q[np.ix_(sens, sens)]).sum())
    return total


def locality_violations(q: np.ndarray, instance: NetworkInstance, group: SymmetryGroup) -> int:
    """Edges from a sensor in sector ``V_m`` that leave ``V_m`` plus the
    adjacent half-sectors of its two neighbours."""
    M = group.M
    if M < 2:
        return 0
    alpha = TWO_PI / M
    r, theta = group.local_polar(instance.points)
    bad = 0
    for i, j in zip(*np.nonzero(q > 0)):
        if r[i] <= group.tol or r[j] <= group.tol:
            continue
        m = int((theta[i] + _angle_tol(r[i])) // alpha) % M
        mid = (m + 0.5) * alpha
        if abs(angular_offset(theta[j], mid)) > alpha + _angle_tol(r[j]):
            bad += 1
    return bad


def region_contained(region: FundamentalRegion, instance: NetworkInstance, group: SymmetryGroup) -> bool:
    """Region nodes lie in ``V_0`` widened by half a sector on each side."""
    M = group.M
    if M < 2:
        return True
    alpha = TWO_PI / M
    r, theta = group.local_polar(instance.points)
    for i in region.all_nodes:
        if r[i] <= group.tol:
            continue
        if abs(angular_offset(theta[i], alpha / 2)) > alpha + _angle_tol(r[i]):
            return False
    return True


@dataclass
class ReductionReport:
    t_full: float
    t_lifted: float
    t_reduced: float
    gap: float
    tol: float
    passed: bool
    group: str
    order: int
    region_optimal: bool
    region_size: int
    vars_full: int
    vars_reduced: int
    mirror_crossings: int
    nearest_collector_violations: int
    orbit_nearest_violations: int
    locality_violations: int
    region_contained: bool
    lifted_invariance: float
    lifted_residual: float
    time_full: float = 0.0
    time_reduced: float = 0.0
    full: Solution | None = field(default=None, repr=False)
    lifted: Solution | None = field(default=None, repr=False)

    @property
    def var_ratio(self) -> float:
        return self.vars_reduced / self.vars_full

    def summary(self) -> dict:
        skip = {"full", "lifted"}
        out = {k: v for k, v in self.__dict__.items() if k not in skip}
        out["var_ratio"] = self.var_ratio
        return out


def verify_reduction(
    instance: NetworkInstance,
    E: np.ndarray,
    group: SymmetryGroup,
    region: FundamentalRegion | None = None,
    tol: float = 1e-6,
    rotation_only: bool = False,
    full_solution: Solution | None = None,
) -> ReductionReport:
    group = working_group(group, rotation_only)
    red = reduce_instance(instance, E, group, region, allow_nonoptimal=True)

    t0 = time.perf_counter()
    full = full_solution if full_solution is not None else solve_max_lifetime(instance, E)
    t1 = time.perf_counter()
    red_sol, lifted = solve_reduced(red)
    t2 = time.perf_counter()

    partition = orbits(group, instance)
    t_full, t_lift = full.objective, lifted.objective
    gap = abs(t_full - t_lift) / max(t_full, EPS_GEO)
    residual = float(np.max(np.abs(conservation_residuals(lifted.flow, instance)), initial=0.0))
    report = ReductionReport(
        t_full=t_full,
        t_lifted=t_lift,
        t_reduced=red_sol.objective,
        gap=gap,
        tol=tol,
        passed=False,
        group=group.describe(),
        order=group.order,
        region_optimal=red.region.optimal,
        region_size=len(red.index_map),
        vars_full=flow_variable_count(instance),
        vars_reduced=flow_variable_count(red.base),
        mirror_crossings=mirror_crossings(lifted.flow, instance, group),
        nearest_collector_violations=nearest_collector_violations(lifted.flow, instance),
        orbit_nearest_violations=(
            orbit_nearest_violations(lifted.flow, instance, partition) if group.kind == "cyclic" else 0
        ),
        locality_violations=locality_violations(lifted.flow, instance, group),
        region_contained=region_contained(red.region, instance, group),
        lifted_invariance=check_invariance(lifted.flow, group).max_violation,
        lifted_residual=residual,
        time_full=t1 - t0,
        time_reduced=t2 - t1,
        full=full,
        lifted=lifted,
    )
    report.passed = bool(
        gap <= tol
        and report.region_optimal
        and report.mirror_crossings == 0
        and report.nearest_collector_violations == 0
        and report.orbit_nearest_violations == 0
        and report.locality_violations == 0
        and report.region_contained
        and report.lifted_residual <= 1e-9 * (1.0 + float(np.abs(instance.data).max(initial=0.0)))
    )
    return report
