import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symlife.errors import SymmetryError, ValidationError
from symlife.geometry import Isometry, Point, Wedge, angular_offset, apply_isometry, distance, wedge_classify

coord = st.floats(-100, 100, allow_nan=False)
angle = st.floats(0, 2 * math.pi)


def test_distance_examples():
    assert distance((0, 0), (3, 4)) == 5.0
    assert distance((1, 1), (1, 1)) == 0.0
    g = Isometry.rotation(0.7)
    assert distance(g((0, 0)), g((1, 0))) == pytest.approx(1.0, abs=1e-15)


def test_isometry_examples():
    p = apply_isometry(Isometry.rotation(math.pi / 2), Point(1, 0))
    assert p.x == pytest.approx(0.0, abs=1e-15) and p.y == pytest.approx(1.0)
    assert Isometry.reflection(0.0)((2, 3)) == Point(2.0, -3.0)
    assert Isometry.identity()((0.3, -7.0)) == Point(0.3, -7.0)


def test_isometry_rejects_non_orthogonal():
    with pytest.raises(ValidationError):
        Isometry(((1.0, 0.1), (0.0, 1.0)))
    with pytest.raises(ValidationError):
        Isometry(((2.0, 0.0), (0.0, 2.0)))


@given(angle, coord, coord, coord, coord)
def test_isometry_preserves_distance(a, cx, cy, px, py):
    for g in (Isometry.rotation(a, (cx, cy)), Isometry.reflection(a, (cx, cy))):
        d0 = distance((px, py), (cx + 1, cy - 2))
        d1 = distance(g((px, py)), g((cx + 1, cy - 2)))
        assert abs(d0 - d1) <= 1e-9 * (1 + d0)


@given(angle, angle, coord, coord)
def test_compose_and_inverse(a, b, x, y):
    g, h = Isometry.rotation(a, (1.0, 2.0)), Isometry.reflection(b)
    gh = g.compose(h)
    direct = g(h((x, y)))
    assert np.allclose(gh((x, y)), direct, atol=1e-9 * (1 + abs(x) + abs(y)))
    back = gh.inverse()(gh((x, y)))
    assert np.allclose(back, (x, y), atol=1e-9 * (1 + abs(x) + abs(y)))
    assert gh.det == -1 and gh.is_reflection
    m = gh.matrix
    assert np.max(np.abs(m @ m.T - np.eye(2))) <= 1e-12


def test_long_composition_stays_orthogonal():
    g = Isometry.identity()
    step = Isometry.rotation(0.1234567)
    for _ in range(5000):
        g = step.compose(g)
    assert np.max(np.abs(g.matrix @ g.matrix.T - np.eye(2))) <= 1e-12


def test_wedge_examples():
    assert wedge_classify((1, 0.1), 4) == Wedge(4, 0, "minus")
    assert wedge_classify((0.5, 0.8), 4) == Wedge(4, 0, "plus")
    assert wedge_classify((-1, 0.5), 4) == Wedge(4, 1, "plus")


def test_wedge_boundaries():
    # sector starts belong to the sector they open; the bisector is "minus"
    assert wedge_classify((0, 1), 4) == Wedge(4, 1, "minus")
    assert wedge_classify((1, 1), 4) == Wedge(4, 0, "minus")
    assert wedge_classify((1, -1e-15), 4).m == 0
    with pytest.raises(SymmetryError):
        wedge_classify((0, 0), 4)
    with pytest.raises(ValidationError):
        wedge_classify((1, 0), 1)


@given(st.integers(2, 12), angle)
def test_wedge_rotation_shifts_sector(M, a):
    p = (math.cos(a), math.sin(a))
    w0 = wedge_classify(p, M)
    q = Isometry.rotation(2 * math.pi / M)(p)
    w1 = wedge_classify(q, M)
    offset = a - w0.m * 2 * math.pi / M
    if 1e-6 < offset < 2 * math.pi / M - 1e-6 and abs(offset - math.pi / M) > 1e-6:
        assert w1.m == (w0.m + 1) % M and w1.half == w0.half


def test_angular_offset():
    assert angular_offset(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    assert angular_offset(math.pi, 0.0) == pytest.approx(math.pi)
    assert -math.pi < angular_offset(-math.pi, 0.0) <= math.pi
