"""Network JSON (schema 1), flow CSV triplets and report serialization."""
from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .errors import SymlifeError, ValidationError
from .model import EnergyModel, NetworkInstance, validate_instance

SCHEMA_VERSION = 1


class ParseError(SymlifeError):
    """A network or config file is malformed."""


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _numbers(row, size, where):
    if not isinstance(row, list) or len(row) != size:
        raise ParseError(f"{where}: expected a list of {size} numbers")
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row):
        raise ParseError(f"{where}: entries must be numbers")
    return [float(v) for v in row]


def network_from_dict(doc, source: str = "<network>") -> NetworkInstance:
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParseError(f"{source}: unsupported schema_version {version!r}")
    for key in ("collectors", "sensors"):
        if not isinstance(doc.get(key), list):
            raise ParseError(f"{source}: missing list '{key}'")
    cols = [_numbers(r, 2, f"{source}: collectors[{i}]") for i, r in enumerate(doc["collectors"])]
    sens = [_numbers(r, 3, f"{source}: sensors[{i}]") for i, r in enumerate(doc["sensors"])]
    terms = doc.get("energy_model", [[1.0, 2.0]])
    if not isinstance(terms, list):
        raise ParseError(f"{source}: energy_model must be a list of [lambda, a] pairs")
    terms = [_numbers(t, 2, f"{source}: energy_model[{i}]") for i, t in enumerate(terms)]
    try:
        model = EnergyModel(tuple(tuple(t) for t in terms))
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from exc
    sen = np.array(sens).reshape(-1, 3)
    return NetworkInstance(np.array(cols).reshape(-1, 2), sen[:, :2], sen[:, 2], model)


def network_to_dict(instance: NetworkInstance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "collectors": [[float(x), float(y)] for x, y in instance.collectors],
        "sensors": [
            [float(x), float(y), float(q)] for (x, y), q in zip(instance.sensors, instance.data)
        ],
        "energy_model": [[lam, a] for lam, a in instance.energy_model.terms],
    }


def read_network(path, check: bool = True) -> NetworkInstance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    inst = network_from_dict(_load_json(text, str(path)), str(path))
    if check:
        problems = [p for p in validate_instance(inst) if p != "no collectors"]
        if problems:
            raise ValidationError(f"{path}: " + "; ".join(problems))
    return inst


def write_network(instance: NetworkInstance, path) -> None:
    Path(path).write_text(dumps(network_to_dict(instance)))


def read_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    doc = _load_json(text, str(path)) if text.strip() else {}
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    return doc


def instance_digest(instance: NetworkInstance) -> str:
    blob = json.dumps(network_to_dict(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def flow_to_csv(q: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "q"])
    for i, j in zip(*np.nonzero(q)):
        w.writerow([int(i), int(j), repr(float(q[i, j]))])
    return buf.getvalue()


def flow_from_csv(text: str, n: int) -> np.ndarray:
    q = np.zeros((n, n))
    rows = csv.DictReader(io.StringIO(text))
    for row in rows:
        q[int(row["i"]), int(row["j"])] = float(row["q"])
    return q


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"
