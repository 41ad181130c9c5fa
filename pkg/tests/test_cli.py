import json
import shutil
from pathlib import Path

import pytest

from symlife.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_chain(tmp_path, capsys):
    code, out, err = run(capsys, "solve", DATA / "chain.json", "--e0", "10", "--out", tmp_path)
    assert code == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["objective"] == pytest.approx(1.75, abs=1e-12)
    assert rep["cycles"] == 5 and "cycles: 5" in err
    assert rep["tolerances"]["tol"] == 1e-6
    assert (tmp_path / "flow.csv").read_text().startswith("i,j,q\n")


def test_no_sink(tmp_path, capsys):
    code, _, err = run(capsys, "solve", DATA / "nosink.json", "--out", tmp_path)
    assert code == 4 and "infeasible: no sink" in err


@pytest.mark.parametrize("name,label", [
    ("square_center", "dihedral, order 8"),
    ("scalene", "trivial, order 1"),
    ("pinwheel", "cyclic, order 4"),
])
def test_detect(capsys, name, label):
    code, out, _ = run(capsys, "detect", DATA / f"{name}.json")
    assert code == 0 and json.loads(out)["group"]["label"] == label


def test_verify(capsys):
    for name in ("pinwheel", "d4_chamber"):
        code, out, _ = run(capsys, "verify", DATA / f"{name}.json")
        rep = json.loads(out)
        assert code == 0 and rep["passed"] and rep["reduction_gap"] <= 1e-6
    code, out, _ = run(capsys, "verify", "--rotation-only", DATA / "aligned.json")
    assert code == 0 and json.loads(out)["verification"]["t_full"] == pytest.approx(1.75)


def test_verify_errors(capsys):
    code, _, err = run(capsys, "verify", DATA / "mirror.json")
    assert code == 5 and "nontrivial sensor stabilizer" in err
    code, _, err = run(capsys, "verify", DATA / "scalene.json")
    assert code == 5 and "nothing to reduce" in err


def test_error_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    code, _, err = run(capsys, "solve", bad, "--out", tmp_path)
    assert code == 2 and "line 1, column" in err
    dup = tmp_path / "dup.json"
    dup.write_text('{"collectors": [[0, 0]], "sensors": [[1, 0, 1], [1, 0, 1]]}')
    code, _, err = run(capsys, "solve", dup, "--out", tmp_path)
    assert code == 3 and "coincident" in err


def test_canonicalize(tmp_path, capsys):
    code, _, _ = run(capsys, "solve", DATA / "pinwheel.json", "--canonicalize", "--out", tmp_path)
    rep = json.loads((tmp_path / "report.json").read_text())
    assert code == 0 and rep["canonicalized"] and rep["invariance_violation"] == 0.0
    assert rep["max_residual"] <= 1e-9


def test_generate(tmp_path, capsys):
    cfg = tmp_path / "g.json"
    cfg.write_text('{"kind": "cyclic", "M": 3, "random_orbits": 2}')
    code, _, _ = run(capsys, "generate", cfg, "--seed", "7", "--out", tmp_path / "net.json")
    assert code == 0
    code, out, _ = run(capsys, "detect", tmp_path / "net.json")
    assert json.loads(out)["group"]["order"] == 3
    cfg.write_text('{"M": 3}')
    code, _, err = run(capsys, "generate", cfg, "--out", tmp_path / "x.json")
    assert code == 2


def test_sweep_partial_failure(tmp_path, capsys):
    for name in ("pinwheel", "d4_chamber"):
        shutil.copy(DATA / f"{name}.json", tmp_path / f"{name}.json")
    (tmp_path / "broken.json").write_text("[1, 2")
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(json.dumps({"files": [str(tmp_path / "*.json")]}))
    code, _, _ = run(capsys, "sweep", cfg, "--out", tmp_path / "out")
    assert code == 1
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert len(lines) == 4
    broken = [ln for ln in lines if "broken" in ln]
    assert len(broken) == 1 and "ParseError" in broken[0]


def test_sweep_empty(tmp_path, capsys):
    cfg = tmp_path / "empty.json"
    cfg.write_text("{}")
    code, _, _ = run(capsys, "sweep", cfg, "--out", tmp_path)
    assert code == 0
    assert (tmp_path / "sweep.csv").read_text().count("\n") == 1
