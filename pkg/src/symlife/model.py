"""Network instances and the distance-power energy model."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .geometry import EPS_GEO, pairwise_distances


@dataclass(frozen=True)
class EnergyModel:
    """Per-unit transmission cost ``sum_n lam_n * d**a_n``.

    Exponents are restricted to ``a >= 0`` so the cost never decreases with
    distance.
    """

    terms: tuple[tuple[float, float], ...] = ((1.0, 2.0),)

    def __post_init__(self):
        terms = tuple((float(lam), float(a)) for lam, a in self.terms)
        object.__setattr__(self, "terms", terms)
        problems = self.diagnostics()
        if problems:
            raise ValidationError("; ".join(problems))

    def diagnostics(self) -> list[str]:
        out = []
        if not self.terms:
            out.append("energy model has no terms")
        for n, (lam, a) in enumerate(self.terms):
            if not (math.isfinite(lam) and math.isfinite(a)):
                out.append(f"energy term {n} is not finite")
            if lam < 0:
                out.append(f"energy term {n} has negative weight {lam}")
            if a < 0:
                out.append(f"energy term {n} has negative exponent {a}")
        if self.terms and not any(lam > 0 for lam, _ in self.terms):
            out.append("energy model has no positive weight")
        return out

    def __call__(self, d):
        d = np.asarray(d, dtype=float)
        return sum(lam * d**a for lam, a in self.terms)


@dataclass(frozen=True, eq=False)
class NetworkInstance:
    """Collectors occupy node indices ``0..K-1``, sensors ``K..K+N-1``.

    Construction does not validate; call :func:`validate_instance` for a list
    of problems, or :meth:`check` to raise on the first batch.
    """

    collectors: np.ndarray
    sensors: np.ndarray
    data: np.ndarray
    energy_model: EnergyModel = field(default_factory=EnergyModel)

    def __post_init__(self):
        col = np.asarray(self.collectors, dtype=float).reshape(-1, 2)
        sen = np.asarray(self.sensors, dtype=float).reshape(-1, 2)
        q = np.asarray(self.data, dtype=float).reshape(-1)
        if q.shape[0] != sen.shape[0]:
            raise ValidationError(
                f"{sen.shape[0]} sensors but {q.shape[0]} data values"
            )
        for arr in (col, sen, q):
            arr.setflags(write=False)
        object.__setattr__(self, "collectors", col)
        object.__setattr__(self, "sensors", sen)
        object.__setattr__(self, "data", q)

    @property
    def K(self) -> int:
        return self.collectors.shape[0]

    @property
    def N(self) -> int:
        return self.sensors.shape[0]

    @property
    def n(self) -> int:
        return self.K + self.N

    @property
    def points(self) -> np.ndarray:
        return np.vstack([self.collectors, self.sensors])

    @property
    def node_data(self) -> np.ndarray:
        """Data generated per node; zero for collectors."""
        return np.concatenate([np.zeros(self.K), self.data])

    def is_sensor(self, i: int) -> bool:
        return i >= self.K

    def kinds(self) -> np.ndarray:
        return np.array([0] * self.K + [1] * self.N)

    def check(self) -> NetworkInstance:
        problems = validate_instance(self)
        if problems:
            raise ValidationError("; ".join(problems))
        return self

    def with_points(self, points: np.ndarray) -> NetworkInstance:
        pts = np.asarray(points, dtype=float)
        return NetworkInstance(pts[: self.K], pts[self.K :], self.data, self.energy_model)

    def permuted(self, perm) -> NetworkInstance:
        """Relabel so that old node ``i`` becomes node ``perm[i]``.

        ``perm`` must keep collectors among collectors.
        """
        perm = np.asarray(perm)
        pts = np.empty((self.n, 2))
        pts[perm] = self.points
        q = np.empty(self.n)
        q[perm] = self.node_data
        return NetworkInstance(pts[: self.K], pts[self.K :], q[self.K :], self.energy_model)

    def diameter(self) -> float:
        if self.n < 2:
            return 0.0
        return float(pairwise_distances(self.points).max())


def validate_instance(instance: NetworkInstance) -> list[str]:
    out = []
    if instance.K == 0:
        out.append("no collectors")
    if instance.N == 0:
        out.append("no sensors")
    pts = instance.points
    bad = np.flatnonzero(~np.all(np.isfinite(pts), axis=1))
    out.extend(f"non-finite coordinate at node {i}" for i in bad)
    for i, q in enumerate(instance.data):
        if not math.isfinite(q):
            out.append(f"non-finite data at node {instance.K + i}")
        elif q < 0:
            out.append(f"negative data {q} at node {instance.K + i}")
    if bad.size == 0 and instance.n >= 2:
        d = pairwise_distances(pts)
        scale = np.maximum(1.0, np.maximum(np.abs(pts).max(axis=1)[:, None], np.abs(pts).max(axis=1)[None, :]))
        hits = np.argwhere(np.triu(d <= EPS_GEO * scale, k=1))
        out.extend(f"coincident nodes ({i},{j})" for i, j in hits)
    out.extend(instance.energy_model.diagnostics())
    return out


def build_energy_matrix(instance: NetworkInstance) -> np.ndarray:
    problems = instance.energy_model.diagnostics()
    if problems:
        raise ValidationError("; ".join(problems))
    d = pairwise_distances(instance.points)
    e = instance.energy_model(d)
    np.fill_diagonal(e, 0.0)
    # bitwise symmetric regardless of float evaluation order
    e = np.triu(e) + np.triu(e, 1).T
    return e


def check_monotone(E: np.ndarray, instance: NetworkInstance, tol: float = EPS_GEO) -> bool:
    """True when larger distances never carry smaller per-unit costs."""
    E = np.asarray(E, dtype=float)
    n = instance.n
    if E.shape != (n, n):
        raise ValidationError(f"energy matrix shape {E.shape} does not match {n} nodes")
    d = pairwise_distances(instance.points)
    off = ~np.eye(n, dtype=bool)
    dist, cost = d[off], E[off]
    order = np.lexsort((cost, dist))
    dist, cost = dist[order], cost[order]
    # group near-equal distances into tie classes
    breaks = np.diff(dist) > tol * (1.0 + dist[1:])
    labels = np.concatenate([[0], np.cumsum(breaks)])
    prev_max = -np.inf
    for lab in range(labels[-1] + 1 if labels.size else 0):
        c = cost[labels == lab]
        lo, hi = c.min(), c.max()
        if hi - lo > tol * (1.0 + abs(hi)):
            return False
        if lo < prev_max - tol * (1.0 + abs(prev_max)):
            return False
        prev_max = max(prev_max, hi)
    return True
