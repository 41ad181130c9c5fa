"""Finite point-group symmetries of a labeled planar network.

Every isometry of a finite point set fixes its centroid, so detection only
searches orthogonal maps about the centroid. Candidates come from sending one
reference node onto each compatible node (by rotation and by reflection) and
are kept only if they induce a kind-preserving permutation of all nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SymmetryError
from .geometry import EPS_GEO, TWO_PI, Isometry, Point, pairwise_distances, polar_angle
from .model import NetworkInstance


@dataclass(frozen=True, eq=False)
class GroupElement:
    iso: Isometry
    perm: tuple[int, ...]

    @property
    def is_reflection(self) -> bool:
        return self.iso.is_reflection

    @property
    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm)) and np.allclose(
            self.iso.matrix, np.eye(2), atol=1e-9
        )

    def compose(self, other: GroupElement) -> GroupElement:
        """``self`` after ``other``."""
        perm = tuple(self.perm[i] for i in other.perm)
        return GroupElement(self.iso.compose(other.iso), perm)

    def inverse(self) -> GroupElement:
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return GroupElement(self.iso.inverse(), tuple(inv))

    def same_as(self, other: GroupElement, tol: float = 1e-9) -> bool:
        return self.perm == other.perm and bool(
            np.max(np.abs(self.iso.matrix - other.iso.matrix)) <= tol
        )


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """Rotations first (by angle), then reflections (by mirror angle).

    ``axis_angle`` is the direction of the mirror taken as the X-axis of the
    working frame (zero when there are no reflections); ``tol`` is the
    matching tolerance used at detection.
    """

    elements: tuple[GroupElement, ...]
    kind: str
    M: int
    center: Point
    axis_angle: float = 0.0
    tol: float = EPS_GEO

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> GroupElement:
        return self.elements[0]

    def describe(self) -> str:
        if self.kind == "trivial":
            return "trivial"
        return f"{self.kind}({self.M})"

    def rotations(self) -> SymmetryGroup:
        rots = tuple(g for g in self.elements if not g.is_reflection)
        kind = "cyclic" if len(rots) > 1 else "trivial"
        return SymmetryGroup(rots, kind, len(rots), self.center, self.axis_angle, self.tol)

    def local_polar(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Radii and angles in ``[0, 2pi)`` in the frame centered on the group
        center with X-axis along ``axis_angle``."""
        rel = np.asarray(points, dtype=float) - np.asarray(self.center)
        r = np.hypot(rel[:, 0], rel[:, 1])
        theta = np.mod(np.arctan2(rel[:, 1], rel[:, 0]) - self.axis_angle, TWO_PI)
        # directions a hair below 2pi belong to the sector starting at 0
        theta[TWO_PI - theta <= 1e-12] = 0.0
        return r, theta


def _node_classes(instance: NetworkInstance, respect_data: bool) -> np.ndarray:
    """Boolean matrix: may node i be mapped onto node j?"""
    kinds = instance.kinds()
    compat = kinds[:, None] == kinds[None, :]
    if respect_data:
        q = instance.node_data
        compat &= np.abs(q[:, None] - q[None, :]) <= 1e-9 * (1.0 + np.maximum(abs(q)[:, None], abs(q)[None, :]))
    return compat


def _match(image: np.ndarray, points: np.ndarray, compat: np.ndarray, eps: float):
    diff = image[:, None, :] - points[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    d = np.where(compat, d, np.inf)
    perm = np.argmin(d, axis=1)
    if np.any(d[np.arange(len(perm)), perm] > eps):
        return None
    if len(set(perm.tolist())) != len(perm):
        return None
    return tuple(int(p) for p in perm)


def detect_symmetry_group(
    instance: NetworkInstance, eps_sym: float | None = None, respect_data: bool = True
) -> SymmetryGroup:
    """Largest finite group of orthogonal maps about the centroid that permutes
    collectors among collectors and sensors among sensors.

    ``eps_sym`` defaults to ``1e-9`` times the network diameter. With
    ``respect_data`` the permutation must also preserve per-sensor data
    volumes, so the detected group is a symmetry of the whole problem.
    """
    pts = instance.points
    n = instance.n
    center = pts.mean(axis=0)
    diam = instance.diameter()
    eps = eps_sym if eps_sym is not None else 1e-9 * max(diam, 1.0)
    rel = pts - center
    r = np.hypot(rel[:, 0], rel[:, 1])
    theta = np.arctan2(rel[:, 1], rel[:, 0])
    compat = _node_classes(instance, respect_data)
    compat &= np.abs(r[:, None] - r[None, :]) <= eps

    ident = GroupElement(Isometry.identity(), tuple(range(n)))
    off_center = np.flatnonzero(r > eps)
    if off_center.size == 0:
        return SymmetryGroup((ident,), "trivial", 1, Point(*center), 0.0, eps)

    # reference: the off-center node with the fewest possible images
    counts = compat[off_center].sum(axis=1)
    a = int(off_center[np.argmin(counts)])
    found: list[tuple[np.ndarray, tuple[int, ...]]] = []
    for b in np.flatnonzero(compat[a]):
        rot = theta[b] - theta[a]
        ca, sa = math.cos(rot), math.sin(rot)
        line = theta[a] + theta[b]
        cb, sb = math.cos(line), math.sin(line)
        for mat in (np.array([[ca, -sa], [sa, ca]]), np.array([[cb, sb], [sb, -cb]])):
            perm = _match(rel @ mat.T, rel, compat, eps)
            if perm is None:
                continue
            if any(np.max(np.abs(mat - m)) <= 1e-9 for m, _ in found):
                continue
            found.append((mat, perm))

    rots, refls = [], []
    for mat, perm in found:
        if np.linalg.det(mat) > 0:
            ang = polar_angle(mat[0, 0], mat[1, 0])
            if TWO_PI - ang <= 1e-9:
                ang = 0.0
            rots.append((ang, mat, perm))
        else:
            # mirror direction in [0, pi)
            ang = math.fmod(polar_angle(mat[0, 0], mat[1, 0]) / 2.0, math.pi)
            if math.pi - ang <= 1e-9:
                ang = 0.0
            refls.append((ang, mat, perm))
    rots.sort(key=lambda t: t[0])
    refls.sort(key=lambda t: t[0])

    def element(mat, perm):
        return GroupElement(Isometry(mat, Point(*(center - mat @ center))), perm)

    elements = tuple(element(m, p) for _, m, p in rots) + tuple(element(m, p) for _, m, p in refls)
    M = len(rots)
    if refls:
        kind, axis = "dihedral", refls[0][0]
    else:
        kind, axis = ("cyclic" if M > 1 else "trivial"), 0.0
    return SymmetryGroup(elements, kind, M, Point(*center), axis, eps)


def is_closed(group: SymmetryGroup) -> bool:
    """Composition table and inverses stay inside the element list."""
    els = group.elements
    if not any(g.is_identity for g in els):
        return False
    for g in els:
        if not any(g.inverse().same_as(h) for h in els):
            return False
        for h in els:
            gh = g.compose(h)
            if not any(gh.same_as(k) for k in els):
                return False
    return True


@dataclass(frozen=True)
class OrbitPartition:
    """Orbits with members listed by position (anticlockwise from the X-axis).

    ``labels[i] == (orbit, position)`` for node ``i``. Orbits of points at the
    group center come first, then the rest ordered by smallest node index.
    """

    orbits: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, int], ...]

    def orbit_of(self, node: int) -> tuple[int, ...]:
        return self.orbits[self.labels[node][0]]


def orbits(group: SymmetryGroup, instance: NetworkInstance) -> OrbitPartition:
    n = instance.n
    seen = [-1] * n
    raw = []
    for start in range(n):
        if seen[start] >= 0:
            continue
        members = {g.perm[start] for g in group.elements}
        for i in members:
            seen[i] = len(raw)
        raw.append(sorted(members))

    r, theta = group.local_polar(instance.points)
    is_center = r <= group.tol
    raw.sort(key=lambda orb: (not all(is_center[i] for i in orb), orb[0]))
    orbit_list, labels = [], [None] * n
    for k, orb in enumerate(raw):
        ordered = sorted(orb, key=lambda i: (0.0 if is_center[i] else theta[i], i))
        orbit_list.append(tuple(ordered))
        for pos, i in enumerate(ordered):
            labels[i] = (k, pos)
    return OrbitPartition(tuple(orbit_list), tuple(labels))


def stabilizer(group: SymmetryGroup, node: int) -> list[GroupElement]:
    return [g for g in group.elements if g.perm[node] == node]


@dataclass(frozen=True)
class FundamentalRegion:
    """Nodes a reduced problem keeps.

    ``nodes`` is F_0 (one representative per free orbit). For dihedral groups
    ``border0``/``border1`` hold the collectors on the mirror half-lines
    bounding the chamber; ``center`` holds a collector at the fixed point.
    ``optimal`` is False when the closed nearest-neighbour region could not be
    built and the plain sector-0 region was used instead.
    """

    kind: str
    M: int
    nodes: tuple[int, ...]
    border0: tuple[int, ...] = ()
    border1: tuple[int, ...] = ()
    center: tuple[int, ...] = ()
    optimal: bool = True
    seed: int | None = None

    @property
    def all_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.nodes) | set(self.border0) | set(self.border1) | set(self.center)))


def fundamental_region(
    group: SymmetryGroup, instance: NetworkInstance, partition: OrbitPartition | None = None
) -> FundamentalRegion:
    if group.kind == "trivial" or group.order < 2:
        raise SymmetryError("nothing to reduce: symmetry group is trivial")
    if partition is None:
        partition = orbits(group, instance)
    r, theta = group.local_polar(instance.points)
    eps = group.tol
    K = instance.K
    center = [i for i in range(instance.n) if r[i] <= eps]
    for i in center:
        if i >= K:
            raise SymmetryError(f"sensor {i} sits at the symmetry center")
    if group.kind == "dihedral":
        return _dihedral_region(group, instance, partition, r, theta, center)
    return _rotation_region(group, instance, partition, r, theta, center)


def _dihedral_region(group, instance, partition, r, theta, center):
    M, K, eps = group.M, instance.K, group.tol
    for i in range(K, instance.n):
        if len(stabilizer(group, i)) > 1:
            raise SymmetryError(f"nontrivial sensor stabilizer at node {i}")
    half = math.pi / M
    nodes, b0, b1 = [], [], []
    for i in range(instance.n):
        if r[i] <= eps:
            continue
        on0 = abs(r[i] * math.sin(theta[i])) <= eps and math.cos(theta[i]) > 0
        on1 = abs(r[i] * math.sin(theta[i] - half)) <= eps and math.cos(theta[i] - half) > 0
        if on0:
            b0.append(i)
        elif on1:
            b1.append(i)
        elif 0.0 < theta[i] < half:
            nodes.append(i)
    region = FundamentalRegion("dihedral", M, tuple(nodes), tuple(b0), tuple(b1), tuple(center))
    _check_transversal(region, partition)
    return region


def _rotation_region(group, instance, partition, r, theta, center):
    M, eps = group.M, group.tol
    pts = instance.points
    d = pairwise_distances(pts)
    free = [orb for orb in partition.orbits if r[orb[0]] > eps]
    sensor_orbits = [orb for orb in free if orb[0] >= instance.K]
    seed_orbit = sensor_orbits[0] if sensor_orbits else free[0]
    seed = seed_orbit[0]

    chosen = []
    for orb in free:
        dist = d[seed, list(orb)]
        best = dist.min()
        # smallest position among near-ties
        pick = next(i for i, di in zip(orb, dist) if di <= best + eps * (1.0 + best))
        chosen.append(pick)

    closed = True
    for a in chosen:
        if a < instance.K:
            continue  # collectors never send, so only sensor rows matter
        for orb, rep in zip(free, chosen):
            if rep == a:
                continue
            best = d[a, list(orb)].min()
            if d[a, rep] > best + eps * (1.0 + best):
                closed = False
                break
        if not closed:
            break

    if closed:
        nodes = tuple(sorted(chosen))
    else:
        width = TWO_PI / M
        nodes = tuple(sorted(i for orb in free for i in orb if theta[i] < width))
    region = FundamentalRegion("cyclic", M, nodes, center=tuple(center), optimal=closed, seed=seed)
    _check_transversal(region, partition)
    return region


def _check_transversal(region: FundamentalRegion, partition: OrbitPartition):
    hits = {}
    for i in region.all_nodes:
        k = partition.labels[i][0]
        hits[k] = hits.get(k, 0) + 1
    if len(hits) != len(partition.orbits) or any(v != 1 for v in hits.values()):
        raise SymmetryError("region does not meet every orbit exactly once")
