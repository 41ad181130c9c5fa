import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symlife.errors import ValidationError
from symlife.generator import GeneratorSpec, Seed, d4_chamber_spec, generate, spec_from_dict
from symlife.symmetry import detect_symmetry_group, orbits


def test_cyclic_example():
    inst = generate(GeneratorSpec("cyclic", 4, seeds=(Seed(1, 0.3), Seed(2, 0.3))))
    assert (inst.K, inst.N) == (1, 8)
    g = detect_symmetry_group(inst)
    assert g.kind in ("cyclic", "dihedral") and g.order >= 4


def test_minimal_cyclic2():
    inst = generate(GeneratorSpec("cyclic", 2, seeds=(Seed(1.0, 0.5),)))
    assert inst.N == 2 and detect_symmetry_group(inst).order >= 2


def test_d4_chamber_layout():
    inst = generate(d4_chamber_spec())
    assert (inst.K, inst.N) == (20, 56)
    g = detect_symmetry_group(inst)
    assert g.describe() == "dihedral(4)"
    sizes = sorted(len(o) for o in orbits(g, inst).orbits)
    assert sizes == [4, 4, 4] + [8] * 8


@pytest.mark.parametrize("seed", [Seed(1.0, 0.0), Seed(0.0, 0.0), Seed(1.0, 1.0)])
def test_boundary_seeds_rejected(seed):
    with pytest.raises(ValidationError):
        generate(GeneratorSpec("dihedral", 4, seeds=(seed,)))


def test_bad_specs():
    with pytest.raises(ValidationError):
        GeneratorSpec("cyclic", 1)
    with pytest.raises(ValidationError):
        GeneratorSpec("helical", 3)
    with pytest.raises(ValidationError):
        GeneratorSpec("cyclic", 3, border_collectors=((1.0, 0),))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["cyclic", "dihedral"]), st.integers(2, 8), st.integers(0, 10**6), st.integers(1, 4))
def test_generated_group_order(kind, M, seed, k):
    spec = GeneratorSpec(kind, M, random_orbits=k, rng_seed=seed)
    a, b = generate(spec), generate(spec)
    assert np.array_equal(a.points, b.points)
    g = detect_symmetry_group(a)
    want = M if kind == "cyclic" else 2 * M
    assert g.order % want == 0
    if k >= 2:
        # one regular polygon is always dihedral; two random orbits are generic
        assert g.order == want
    assert a.N == k * want


def test_spec_from_dict():
    spec = spec_from_dict({"kind": "dihedral", "M": 3, "seeds": [[2.0, 0.4], {"x": 3.0, "y": 0.2, "kind": "collector"}],
                           "border_collectors": [[1.5, 1]], "energy_model": [[1.0, 2.0], [0.1, 4.0]]})
    inst = generate(spec)
    assert (inst.K, inst.N) == (1 + 6 + 3, 6)
    assert inst.energy_model.terms == ((1.0, 2.0), (0.1, 4.0))
    assert math.isclose(spec.wedge, math.pi / 3)
