"""Command-line front end: ``symlife {detect,solve,verify,generate,sweep}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .canonical import canonicalize, check_invariance
from .errors import InfeasibleError, ReductionError, SolverError, SymmetryError, ValidationError
from .files import (
    ParseError,
    dumps,
    flow_to_csv,
    instance_digest,
    read_config,
    read_network,
    write_network,
)
from .generator import d4_chamber_spec, generate, spec_from_dict
from .model import build_energy_matrix
from .reduction import verify_reduction
from .solver import conservation_residuals, lifetime_cycles, make_solution, solve_max_lifetime
from .sweep import PLOT_COLUMNS, plot_rows, rows_to_csv, run_sweep
from .symmetry import detect_symmetry_group, orbits, stabilizer

logger = logging.getLogger("symlife")

EXIT_AUDIT = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_INFEASIBLE = 4
EXIT_SYMMETRY = 5
EXIT_SOLVER = 6

_EXIT_CODES = [
    (ParseError, EXIT_PARSE),
    (ValidationError, EXIT_INVALID),
    (InfeasibleError, EXIT_INFEASIBLE),
    (SymmetryError, EXIT_SYMMETRY),
    (ReductionError, EXIT_SYMMETRY),
    (SolverError, EXIT_SOLVER),
]

LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def _group_summary(group, instance) -> dict:
    part = orbits(group, instance)
    table = []
    for k, orb in enumerate(part.orbits):
        kind = "collector" if orb[0] < instance.K else "sensor"
        table.append({"orbit": k, "size": len(orb), "kind": kind,
                      "stabilizer": len(stabilizer(group, orb[0])), "members": list(orb)})
    return {
        "kind": group.kind,
        "M": group.M,
        "order": group.order,
        "label": f"{group.kind}, order {group.order}",
        "center": [round(group.center.x, 12) + 0.0, round(group.center.y, 12) + 0.0],
        "orbits": table,
    }


def _emit(report: dict, out: Path | None, name: str = "report.json") -> None:
    text = dumps(report)
    sys.stdout.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _base_report(args, instance=None) -> dict:
    rep = {"command": " ".join(args.argv), "tolerances": {"tol": args.tol, "eps_geo": 1e-9, "eps_opt": 1e-9}}
    if instance is not None:
        rep["instance_digest"] = instance_digest(instance)
        rep["K"], rep["N"] = instance.K, instance.N
    return rep


def cmd_detect(args) -> int:
    inst = read_network(args.network)
    start = time.perf_counter()
    group = detect_symmetry_group(inst)
    rep = _base_report(args, inst)
    rep["group"] = _group_summary(group, inst)
    rep["wall_time_s"] = time.perf_counter() - start
    _emit(rep, args.out)
    return 0


def cmd_solve(args) -> int:
    inst = read_network(args.network)
    if inst.K == 0:
        raise InfeasibleError("infeasible: no sink")
    start = time.perf_counter()
    E = build_energy_matrix(inst)
    sol = solve_max_lifetime(inst, E)
    group = detect_symmetry_group(inst)
    rep = _base_report(args, inst)
    rep["group"] = {"kind": group.kind, "M": group.M, "order": group.order}
    q = sol.flow
    if args.canonicalize and group.order > 1:
        q = canonicalize(q, group, orbits(group, inst), inst.K)
        sol = make_solution(q, E, inst.K)
    inv = check_invariance(q, group)
    rep.update(
        objective=sol.objective,
        sensor_energies=sol.sensor_energies,
        collector_intake=sol.intake,
        max_residual=float(np.max(np.abs(conservation_residuals(q, inst)), initial=0.0)),
        canonicalized=bool(args.canonicalize and group.order > 1),
        invariance_violation=inv.max_violation,
        reduction_gap=None,
    )
    if args.e0 is not None:
        cycles = lifetime_cycles(args.e0, sol)
        rep["e0"] = args.e0
        rep["cycles"] = "unbounded" if cycles is None else cycles
    rep["wall_time_s"] = time.perf_counter() - start
    out = args.out or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "flow.csv").write_text(flow_to_csv(q))
    _emit(rep, out)
    if "cycles" in rep:
        sys.stderr.write(f"cycles: {rep['cycles']}\n")
    return 0


def cmd_verify(args) -> int:
    inst = read_network(args.network)
    start = time.perf_counter()
    E = build_energy_matrix(inst)
    group = detect_symmetry_group(inst)
    if group.order < 2:
        raise SymmetryError("nothing to reduce: symmetry group is trivial")
    report = verify_reduction(inst, E, group, tol=args.tol, rotation_only=args.rotation_only)
    rep = _base_report(args, inst)
    rep["group"] = {"kind": group.kind, "M": group.M, "order": group.order}
    rep["verification"] = report.summary()
    rep["verification"].pop("time_full")
    rep["verification"].pop("time_reduced")
    rep["reduction_gap"] = report.gap
    rep["passed"] = report.passed
    rep["wall_time_s"] = time.perf_counter() - start
    _emit(rep, args.out)
    return 0 if report.passed else EXIT_AUDIT


def cmd_generate(args) -> int:
    cfg = read_config(args.config)
    if cfg.get("preset") == "d4_chamber":
        spec = d4_chamber_spec()
    else:
        if args.seed is not None:
            cfg["rng_seed"] = args.seed
        try:
            spec = spec_from_dict(cfg)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{args.config}: bad generator spec ({exc})") from exc
    inst = generate(spec)
    out = args.out or Path("network.json")
    if out.suffix != ".json":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "network.json"
    write_network(inst, out)
    sys.stdout.write(f"wrote {out} ({inst.K} collectors, {inst.N} sensors)\n")
    return 0


def cmd_sweep(args) -> int:
    cfg = read_config(args.config)
    tol = float(cfg.get("tol", args.tol))
    rows = run_sweep(cfg, tol=tol, seed_offset=args.seed or 0, jobs=args.jobs)
    out = args.out or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(rows_to_csv(rows))
    (out / "plot_gap_by_M.csv").write_text(rows_to_csv(plot_rows(rows), PLOT_COLUMNS))
    failed = sum(1 for r in rows if not r["passed"] or r["error"])
    sys.stdout.write(f"{len(rows)} rows, {failed} failed -> {out / 'sweep.csv'}\n")
    return EXIT_AUDIT if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="relative gap tolerance (default 1e-6)")
    common.add_argument("--out", type=Path, default=None, help="output directory (or file for generate)")
    common.add_argument("--seed", type=int, default=None, help="rng seed override / offset")

    p = argparse.ArgumentParser(prog="symlife", description=__doc__)
    p.add_argument("--version", action="version", version=f"symlife {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", parents=[common], help="detect the point-group symmetry")
    d.add_argument("network", type=Path)
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("solve", parents=[common], help="solve the maximum-lifetime LP")
    s.add_argument("network", type=Path)
    s.add_argument("--e0", type=float, default=None, help="initial battery energy")
    s.add_argument("--canonicalize", action="store_true", help="symmetrize and clean the optimum")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", parents=[common], help="compare full and reduced solves")
    v.add_argument("network", type=Path)
    v.add_argument("--rotation-only", action="store_true", help="reduce over the rotation subgroup")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", parents=[common], help="build a network from a generator spec")
    g.add_argument("config", type=Path)
    g.set_defaults(func=cmd_generate)

    w = sub.add_parser("sweep", parents=[common], help="run a full-vs-reduced sweep")
    w.add_argument("config", type=Path)
    w.add_argument("--jobs", type=int, default=1, help="worker processes")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    level = os.environ.get("SYMLIFE_LOG", "quiet").lower()
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except tuple(cls for cls, _ in _EXIT_CODES) as exc:
        code = next(c for cls, c in _EXIT_CODES if isinstance(exc, cls))
        sys.stderr.write(f"error: {exc}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
