import numpy as np
import pytest
from hypothesis import given, strategies as st

from symlife.errors import ValidationError
from symlife.model import EnergyModel, NetworkInstance, build_energy_matrix, check_monotone, validate_instance


def two_points(model):
    return NetworkInstance(np.array([[0.0, 0.0]]), np.array([[3.0, 0.0]]), np.array([1.0]), model)


def test_energy_examples():
    assert build_energy_matrix(two_points(EnergyModel()))[1, 0] == 9.0
    E = build_energy_matrix(two_points(EnergyModel(((1.0, 1.0), (2.0, 0.0)))))
    assert E[0, 1] == 5.0
    assert np.all(np.diag(E) == 0.0)


@pytest.mark.parametrize("terms", [((-1.0, 2.0),), ((1.0, -1.0),), ((0.0, 2.0),), ((float("nan"), 2.0),), ()])
def test_energy_model_rejects(terms):
    with pytest.raises(ValidationError):
        EnergyModel(terms)


@given(st.integers(0, 2**32 - 1))
def test_energy_matrix_symmetric_and_monotone(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(6, 2))
    terms = tuple((float(rng.uniform(0.1, 2)), float(rng.uniform(0, 4))) for _ in range(int(rng.integers(1, 4))))
    inst = NetworkInstance(pts[:2], pts[2:], np.ones(4), EnergyModel(terms))
    E = build_energy_matrix(inst)
    assert np.array_equal(E, E.T)
    assert check_monotone(E, inst)


def test_monotone_counterexample():
    inst = NetworkInstance(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0], [3.0, 0.0]]), np.ones(2))
    E = build_energy_matrix(inst)
    E[0, 1] = E[1, 0] = 50.0
    assert not check_monotone(E, inst)


def test_monotone_equilateral():
    s = np.sqrt(3) / 2
    inst = NetworkInstance(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0], [0.5, s]]), np.ones(2))
    E = 7.0 * (1 - np.eye(3))
    assert check_monotone(E, inst)


def test_validate_examples():
    sens = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [3.0, 3.0], [1.0, 0.0]])
    inst = NetworkInstance(np.array([[0.0, 0.0]]), sens, np.ones(5))
    # nodes: collector 0, sensors 1..5; the duplicate sits at 1 and 5
    assert "coincident nodes (1,5)" in validate_instance(inst)
    inst = NetworkInstance(np.array([[0.0, 0.0], [5.0, 5.0], [1.0, 0.0]]), sens[:3], np.ones(3))
    assert "coincident nodes (2,3)" in validate_instance(inst)
    empty = NetworkInstance(np.zeros((0, 2)), np.array([[1.0, 0.0]]), np.ones(1))
    assert validate_instance(empty) == ["no collectors"]
    square = NetworkInstance(np.array([[0.0, 0.0]]), np.array([[1, 0], [0, 1], [-1, 0], [0, -1]]), np.ones(4))
    assert validate_instance(square) == []


def test_validate_bad_data():
    inst = NetworkInstance(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0]]), np.array([-1.0]))
    assert any(m.startswith("negative data") for m in validate_instance(inst))
    with pytest.raises(ValidationError):
        inst.check()
    with pytest.raises(ValidationError):
        NetworkInstance(np.zeros((1, 2)), np.ones((2, 2)), np.ones(3))


def test_instance_read_only_and_permuted():
    inst = NetworkInstance(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0], [2.0, 0.0]]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        inst.sensors[0, 0] = 5.0
    p = inst.permuted([0, 2, 1])
    assert np.array_equal(p.sensors, [[2.0, 0.0], [1.0, 0.0]])
    assert np.array_equal(p.data, [2.0, 1.0])
    assert inst.diameter() == 2.0
