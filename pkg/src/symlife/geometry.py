"""Planar points, isometries and the angular wedges used by the reductions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SymmetryError, ValidationError

EPS_GEO = 1e-9
TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float


def _as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValidationError(f"non-finite point {p!r}")
    return Point(x, y)


def distance(a, b) -> float:
    a, b = _as_point(a), _as_point(b)
    return math.hypot(a.x - b.x, a.y - b.y)


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def close(a: float, b: float, tol: float = EPS_GEO) -> bool:
    """Absolute-plus-relative comparison used for geometric ties."""
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


def polar_angle(x: float, y: float) -> float:
    """Angle of ``(x, y)`` in ``[0, 2*pi)``."""
    theta = math.atan2(y, x)
    if theta < 0.0:
        theta += TWO_PI
    if theta >= TWO_PI:
        theta -= TWO_PI
    return theta


@dataclass(frozen=True)
class Isometry:
    """The map ``p -> linear @ p + shift``.

    ``linear`` must be orthogonal; construction rejects anything else.
    """

    linear: tuple[tuple[float, float], tuple[float, float]]
    shift: Point = Point(0.0, 0.0)

    def __post_init__(self):
        mat = np.array(self.linear, dtype=float)
        if mat.shape != (2, 2) or not np.all(np.isfinite(mat)):
            raise ValidationError("isometry linear part must be a finite 2x2 matrix")
        if np.max(np.abs(mat @ mat.T - np.eye(2))) > 1e-12:
            raise ValidationError("isometry linear part is not orthogonal")
        object.__setattr__(self, "linear", tuple(tuple(float(v) for v in row) for row in mat))
        object.__setattr__(self, "shift", _as_point(self.shift))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear)

    @property
    def det(self) -> int:
        return 1 if np.linalg.det(self.matrix) > 0 else -1

    @property
    def is_reflection(self) -> bool:
        return self.det < 0

    def __call__(self, p) -> Point:
        return apply_isometry(self, p)

    def apply_array(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.matrix.T + np.asarray(self.shift)

    def compose(self, other: Isometry) -> Isometry:
        """``self`` after ``other``."""
        a, b = self.matrix, other.matrix
        shift = a @ np.asarray(other.shift) + np.asarray(self.shift)
        return Isometry(_reorthogonalize(a @ b), Point(*shift))

    def inverse(self) -> Isometry:
        inv = self.matrix.T
        return Isometry(inv, Point(*(-inv @ np.asarray(self.shift))))

    @classmethod
    def identity(cls) -> Isometry:
        return cls(((1.0, 0.0), (0.0, 1.0)))

    @classmethod
    def rotation(cls, angle: float, center=(0.0, 0.0)) -> Isometry:
        c, s = math.cos(angle), math.sin(angle)
        return cls._about(np.array([[c, -s], [s, c]]), center)

    @classmethod
    def reflection(cls, line_angle: float, center=(0.0, 0.0)) -> Isometry:
        """Mirror across the line through ``center`` at angle ``line_angle``."""
        c, s = math.cos(2 * line_angle), math.sin(2 * line_angle)
        return cls._about(np.array([[c, s], [s, -c]]), center)

    @classmethod
    def translation(cls, dx: float, dy: float) -> Isometry:
        return cls(((1.0, 0.0), (0.0, 1.0)), Point(dx, dy))

    @classmethod
    def _about(cls, mat: np.ndarray, center) -> Isometry:
        c = np.asarray(center, dtype=float)
        return cls(mat, Point(*(c - mat @ c)))


def _reorthogonalize(mat: np.ndarray) -> np.ndarray:
    # products of many float rotations drift; snap back via polar decomposition
    u, _, vt = np.linalg.svd(mat)
    return u @ vt


def apply_isometry(g: Isometry, p) -> Point:
    p = _as_point(p)
    (a, b), (c, d) = g.linear
    return Point(a * p.x + b * p.y + g.shift.x, c * p.x + d * p.y + g.shift.y)


@dataclass(frozen=True)
class Wedge:
    """Sector ``m`` of an ``M``-fold split of the plane and the half it falls in.

    Sector ``m`` spans polar angles ``[m*2pi/M, (m+1)*2pi/M)``; ``half`` is
    ``"minus"`` for the lower half (closed at the bisector) and ``"plus"`` above.
    """

    M: int
    m: int
    half: str

    def __post_init__(self):
        if self.M < 2:
            raise ValidationError("wedge fold count must be >= 2")
        if not 0 <= self.m < self.M:
            raise ValidationError("wedge index out of range")
        if self.half not in ("minus", "plus"):
            raise ValidationError("wedge half must be 'minus' or 'plus'")


def wedge_classify(p, M: int) -> Wedge:
    p = _as_point(p)
    if M < 2:
        raise ValidationError("wedge fold count must be >= 2")
    if math.hypot(p.x, p.y) <= EPS_GEO:
        raise SymmetryError("center point has full stabilizer; its wedge is undefined")
    width = TWO_PI / M
    theta = polar_angle(p.x, p.y)
    m = int(theta // width)
    offset = theta - m * width
    # absorb float noise at sector starts so boundaries land in the sector they open
    if width - offset <= EPS_GEO:
        m, offset = (m + 1) % M, 0.0
    m %= M
    half = "minus" if offset <= width / 2 + EPS_GEO else "plus"
    return Wedge(M, m, half)


def angular_offset(theta: float, reference: float) -> float:
    """Signed difference ``theta - reference`` wrapped into ``(-pi, pi]``."""
    d = math.fmod(theta - reference, TWO_PI)
    if d <= -math.pi:
        d += TWO_PI
    elif d > math.pi:
        d -= TWO_PI
    return d
