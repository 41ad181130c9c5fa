import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import dual_lower_bound, highs, random_instance, vertex_enumeration
from symlife.errors import InfeasibleError, ValidationError
from symlife.model import EnergyModel, NetworkInstance, build_energy_matrix
from symlife.solver import (
    conservation_residuals,
    flow_variable_count,
    lifetime_cycles,
    make_solution,
    sensor_energies,
    solve_max_lifetime,
)


def chain():
    return NetworkInstance(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0], [2.0, 0.0]]), np.ones(2))


def solve(inst):
    return solve_max_lifetime(inst, build_energy_matrix(inst))


def test_sensor_energies_examples():
    q = np.zeros((3, 3))
    E = np.zeros((3, 3))
    q[2, 1], E[2, 1] = 5.0, 9.0
    assert list(sensor_energies(q, E)) == [0.0, 0.0, 45.0]
    assert not sensor_energies(np.zeros((3, 3)), E).any()


def test_single_route():
    inst = NetworkInstance(np.array([[0.0, 0.0]]), np.array([[3.0, 0.0]]), np.array([5.0]))
    sol = solve(inst)
    assert sol.objective == pytest.approx(45.0, abs=1e-12)
    assert sol.flow[1, 0] == pytest.approx(5.0)


def test_chain():
    sol = solve(chain())
    assert sol.objective == pytest.approx(1.75, abs=1e-12)
    assert np.allclose(sol.sensor_energies, [1.75, 1.75])
    assert sol.flow[2, 1] == pytest.approx(0.75) and sol.flow[2, 0] == pytest.approx(0.25)
    assert sol.intake[0] == pytest.approx(2.0)
    assert lifetime_cycles(10.0, sol) == 5


def test_unit_circle_direct():
    pts = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float)
    sol = solve(NetworkInstance(np.zeros((1, 2)), pts, np.ones(4)))
    assert sol.objective == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(sol.flow[1:, 0], 1.0)


def test_lifetime_cycles():
    zero = make_solution(np.zeros((2, 2)), np.zeros((2, 2)), 1)
    assert lifetime_cycles(5.0, zero) is None
    sol = solve(NetworkInstance(np.array([[0.0, 0.0]]), np.array([[3.0, 0.0]]), np.array([5.0])))
    assert lifetime_cycles(45.0, sol) == 1
    with pytest.raises(ValidationError):
        lifetime_cycles(-1.0, sol)


def test_zero_data_and_errors():
    inst = NetworkInstance(np.zeros((1, 2)), np.array([[1.0, 0.0], [2.0, 1.0]]), np.zeros(2))
    sol = solve(inst)
    assert sol.objective == 0.0 and not sol.flow.any()
    with pytest.raises(InfeasibleError, match="infeasible: no sink"):
        solve_max_lifetime(NetworkInstance(np.zeros((0, 2)), np.ones((1, 2)), np.ones(1)), np.zeros((1, 1)))
    with pytest.raises(ValidationError):
        solve_max_lifetime(chain(), np.zeros((2, 2)))


def test_rules_agree_and_deterministic():
    rng = np.random.default_rng(11)
    inst = random_instance(rng, 3, 9)
    E = build_energy_matrix(inst)
    a = solve_max_lifetime(inst, E)
    b = solve_max_lifetime(inst, E)
    c = solve_max_lifetime(inst, E, rule="bland")
    assert np.array_equal(a.flow, b.flow) and a.objective == b.objective
    assert c.objective == pytest.approx(a.objective, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_against_oracles(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 4))
    K = int(rng.integers(1, 8 - N))
    inst = random_instance(rng, K, N)
    E = build_energy_matrix(inst)
    sol = solve_max_lifetime(inst, E)
    assert sol.objective == pytest.approx(vertex_enumeration(K, inst.data, E), rel=1e-9)
    assert np.abs(conservation_residuals(sol.flow, inst)).max() <= 1e-9
    assert sol.flow.min() >= 0 and not sol.flow[:K].any() and not np.diag(sol.flow).any()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_larger_against_highs_and_dual(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, int(rng.integers(1, 4)), int(rng.integers(5, 15)))
    E = build_energy_matrix(inst)
    sol = solve_max_lifetime(inst, E)
    assert sol.objective == pytest.approx(highs(inst.K, inst.data, E), rel=1e-8)
    assert np.all(sol.prices >= -1e-12) and sol.prices.sum() == pytest.approx(1.0)
    # dual certificate: weak duality bound closes the gap
    assert dual_lower_bound(inst.K, inst.data, E, sol.prices) == pytest.approx(sol.objective, rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0))
def test_scaling(seed, s):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, 2, 5, terms=((1.0, 2.0),))
    base = solve(inst).objective
    data_scaled = solve(NetworkInstance(inst.collectors, inst.sensors, s * inst.data)).objective
    geo_scaled = solve(inst.with_points(s * inst.points)).objective
    assert data_scaled == pytest.approx(s * base, rel=1e-9)
    assert geo_scaled == pytest.approx(s * s * base, rel=1e-9)


def test_variable_count():
    assert flow_variable_count(chain()) == 4
