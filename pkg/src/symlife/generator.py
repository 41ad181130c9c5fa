"""Networks with a designed cyclic or dihedral symmetry.

A network is grown from seed points in the generating wedge by applying every
group element. Node order is fixed: collectors (center, seeded orbits, border
orbits) then sensors, orbit-major and position-minor within each block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .model import EnergyModel, NetworkInstance

SEED_MARGIN = 1e-6


@dataclass(frozen=True)
class Seed:
    x: float
    y: float
    kind: str = "sensor"
    data: float = 1.0


@dataclass(frozen=True)
class GeneratorSpec:
    """``border_collectors`` holds ``(radius, line)`` pairs with ``line`` 0 for
    the mirror along the X-axis and 1 for the mirror at angle ``pi/M``;
    dihedral only. ``random_orbits`` adds that many sensor seeds drawn from
    ``rng_seed``: radii from ``radius_range`` and angles from a band narrower
    than half a sector, which keeps nearest-neighbour regions closed for
    rotation groups."""

    kind: str
    M: int
    seeds: tuple[Seed, ...] = ()
    center_collector: bool = True
    border_collectors: tuple[tuple[float, int], ...] = ()
    random_orbits: int = 0
    rng_seed: int = 0
    radius_range: tuple[float, float] = (1.0, 3.0)
    data: float = 1.0
    energy_model: EnergyModel = field(default_factory=EnergyModel)

    def __post_init__(self):
        if self.kind not in ("cyclic", "dihedral"):
            raise ValidationError(f"unknown group kind {self.kind!r}")
        if self.M < 2:
            raise ValidationError("fold count M must be >= 2")
        object.__setattr__(self, "seeds", tuple(s if isinstance(s, Seed) else Seed(*s) for s in self.seeds))
        object.__setattr__(self, "border_collectors", tuple((float(r), int(l)) for r, l in self.border_collectors))
        if self.border_collectors and self.kind != "dihedral":
            raise ValidationError("border collectors need mirror lines (dihedral kind)")

    @property
    def wedge(self) -> float:
        """Angular width of the generating wedge."""
        return 2 * math.pi / self.M if self.kind == "cyclic" else math.pi / self.M


def random_seeds(spec: GeneratorSpec) -> list[Seed]:
    rng = np.random.default_rng(spec.rng_seed)
    lo, hi = spec.radius_range
    w = spec.wedge
    if spec.kind == "cyclic":
        mid, half_band = w / 2, 0.2 * w
    else:
        mid, half_band = w / 2, 0.4 * w
    out = []
    for _ in range(spec.random_orbits):
        r = rng.uniform(lo, hi)
        a = mid + rng.uniform(-half_band, half_band)
        out.append(Seed(r * math.cos(a), r * math.sin(a), "sensor", spec.data))
    return out


def _rot(points: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return points @ np.array([[c, -s], [s, c]]).T


def _orbit(p: np.ndarray, spec: GeneratorSpec) -> np.ndarray:
    M = spec.M
    base = [p]
    if spec.kind == "dihedral":
        base.append(np.array([p[0], -p[1]]))
    imgs = [_rot(np.array([b]), 2 * math.pi * m / M)[0] for m in range(M) for b in base]
    imgs = np.array(imgs)
    ang = np.mod(np.arctan2(imgs[:, 1], imgs[:, 0]), 2 * math.pi)
    ang[2 * math.pi - ang < 1e-12] = 0.0
    return imgs[np.argsort(ang, kind="stable")]


def _check_seed(s: Seed, spec: GeneratorSpec):
    r = math.hypot(s.x, s.y)
    theta = math.atan2(s.y, s.x)
    w = spec.wedge
    if r <= SEED_MARGIN:
        raise ValidationError("seed at the center; use center_collector instead")
    if not (r * math.sin(theta) > SEED_MARGIN and r * math.sin(w - theta) > SEED_MARGIN and 0 < theta < w):
        where = "mirror line" if spec.kind == "dihedral" else "wedge boundary"
        raise ValidationError(f"seed ({s.x}, {s.y}) lies on or outside the {where}")
    if s.kind not in ("sensor", "collector"):
        raise ValidationError(f"unknown seed kind {s.kind!r}")
    if s.data < 0:
        raise ValidationError("seed data must be nonnegative")


def generate(spec: GeneratorSpec) -> NetworkInstance:
    seeds = list(spec.seeds) + random_seeds(spec)
    for s in seeds:
        _check_seed(s, spec)
    collectors, sensors, data = [], [], []
    if spec.center_collector:
        collectors.append(np.zeros((1, 2)))
    for s in seeds:
        if s.kind == "collector":
            collectors.append(_orbit(np.array([s.x, s.y]), spec))
    for radius, line in spec.border_collectors:
        if radius <= 0 or line not in (0, 1):
            raise ValidationError("border collector needs positive radius and line 0 or 1")
        a = 0.0 if line == 0 else math.pi / spec.M
        ring = _rot(np.array([[radius, 0.0]]), a)
        collectors.append(np.array([_rot(ring, 2 * math.pi * m / spec.M)[0] for m in range(spec.M)]))
    for s in seeds:
        if s.kind == "sensor":
            orb = _orbit(np.array([s.x, s.y]), spec)
            sensors.append(orb)
            data.extend([s.data] * len(orb))
    col = np.vstack(collectors) if collectors else np.zeros((0, 2))
    sen = np.vstack(sensors) if sensors else np.zeros((0, 2))
    return NetworkInstance(col, sen, np.array(data), spec.energy_model)


def d4_chamber_spec(energy_model: EnergyModel | None = None) -> GeneratorSpec:
    """D4 layout with seven sensors and one collector inside the chamber and
    three collectors on its two bounding mirror half-lines."""
    polar = [(1.0, 10), (1.6, 30), (2.2, 15), (2.8, 35), (3.4, 8), (3.9, 25), (4.6, 38)]
    seeds = [Seed(r * math.cos(math.radians(a)), r * math.sin(math.radians(a))) for r, a in polar]
    seeds.append(Seed(3.0 * math.cos(math.radians(22)), 3.0 * math.sin(math.radians(22)), "collector"))
    return GeneratorSpec(
        "dihedral",
        4,
        tuple(seeds),
        center_collector=False,
        border_collectors=((2.0, 0), (4.5, 0), (3.2, 1)),
        energy_model=energy_model or EnergyModel(),
    )


def spec_from_dict(d: dict) -> GeneratorSpec:
    seeds = tuple(Seed(*s) if isinstance(s, (list, tuple)) else Seed(**s) for s in d.get("seeds", ()))
    energy = d.get("energy_model")
    kwargs = dict(
        kind=d["kind"],
        M=int(d["M"]),
        seeds=seeds,
        center_collector=bool(d.get("center_collector", True)),
        border_collectors=tuple(tuple(b) for b in d.get("border_collectors", ())),
        random_orbits=int(d.get("random_orbits", 0)),
        rng_seed=int(d.get("rng_seed", 0)),
        radius_range=tuple(d.get("radius_range", (1.0, 3.0))),
        data=float(d.get("data", 1.0)),
    )
    if energy is not None:
        kwargs["energy_model"] = EnergyModel(tuple(tuple(t) for t in energy))
    return GeneratorSpec(**kwargs)
