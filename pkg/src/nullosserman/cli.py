"""Command-line driver: validate model files, run Osserman checks, reproduce tables.

Exit codes: 0 pass, 1 I/O error, 2 validation failure, 3 verdict failure.
A single JSON report goes to stdout and a readable table to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .catalog import load_model, structure_of
from .curvature import (
    AlmostComplexJ,
    ChartPointModel,
    LiePointModel,
    coordinate_curvature,
    lie_group_curvature,
    reconstructed_curvature,
    space_form_curvature,
)
from .errors import SchemaError, StructureValidationError
from .gff import STRUCTURE_TOL, GffPoint, validate_structure
from .osserman import OssermanConfig, check_null_osserman, check_phi_null_osserman
from .reproduce import TABLES
from .tensor_core import validate_curvature_like

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_VERDICT = 0, 1, 2, 3
ENGINES = ("eq1", "koszul", "chart", "thm57")
MODES = ("phi-null", "null")


class EngineMismatchError(ValueError):
    pass


def default_tol() -> float:
    env = os.environ.get("OSSERMAN_TOL")
    return float(env) if env else OssermanConfig.tol


def _report(command, model, results, seed, tolerances, started) -> dict:
    return {
        "command": command,
        "model": model,
        "results": results,
        "seed": seed,
        "tolerances": tolerances,
        "wall_time_ms": int(round((time.perf_counter() - started) * 1000)),
    }


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _err(*lines) -> None:
    for line in lines:
        print(line, file=sys.stderr)


def _read(path: str) -> str | None:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        _err(f"error: cannot read {path}: {exc.strerror or exc}")
        return None


def curvature_for(engine: str, descriptor, model):
    """Pick the curvature engine; returns ``(R, S)`` in the structure frame."""
    S = structure_of(model)
    params = descriptor.parameters
    if engine == "eq1":
        if "c" not in params:
            raise EngineMismatchError("eq1 needs a 'c' parameter in the model file")
        return space_form_curvature(S, float(params["c"])), S
    if engine == "koszul":
        if not isinstance(model, LiePointModel):
            raise EngineMismatchError(f"koszul needs a lie model, got kind {descriptor.kind!r}")
        return lie_group_curvature(model), S
    if engine == "chart":
        if not isinstance(model, ChartPointModel):
            raise EngineMismatchError(f"chart needs a chart model, got kind {descriptor.kind!r}")
        return coordinate_curvature(model), S
    if engine == "thm57":
        if S.s != 2:
            raise EngineMismatchError(f"thm57 needs s = 2, got s = {S.s}")
        if "c1" in params and "c2" in params:
            c1, c2 = float(params["c1"]), float(params["c2"])
        elif "c" in params:
            c1, c2 = float(params["c"]) + 1.0, (float(params["c"]) + 4.0) / 4.0
        else:
            raise EngineMismatchError("thm57 needs 'c1' and 'c2' (or 'c') parameters")
        return reconstructed_curvature(S, AlmostComplexJ.from_phi(S), c1, c2), S
    raise EngineMismatchError(f"unknown engine {engine!r}")


def _load(path: str, validate: bool):
    text = _read(path)
    if text is None:
        return EXIT_IO, None
    try:
        return EXIT_OK, load_model(text, validate=validate)
    except SchemaError as exc:
        _err(f"schema error in {path}: {exc}")
    except StructureValidationError as exc:
        _err(f"structure validation failed in {path}: {exc}")
    return EXIT_INVALID, None


def cmd_validate(args) -> int:
    started = time.perf_counter()
    code, loaded = _load(args.model_file, validate=False)
    if loaded is None:
        return code
    descriptor, model = loaded
    # chart files are checked at their coordinate point, as written
    S: GffPoint = model.coordinate_point if isinstance(model, ChartPointModel) else structure_of(model)
    report = validate_structure(S)
    results = {"passed": report.passed, "violations": report.as_dict()["violations"]}
    if isinstance(model, LiePointModel):
        lie = model.violations()
        results["bracket_violations"] = lie
        results["passed"] = results["passed"] and max(lie.values()) <= STRUCTURE_TOL
    _err(f"{'axiom':40s} {'violation':>12s}  status")
    for name, value in {**results["violations"], **results.get("bracket_violations", {})}.items():
        _err(f"{name:40s} {value:12.3e}  {'ok' if value <= STRUCTURE_TOL else 'FAIL'}")
    _emit(_report("validate", descriptor.as_dict(), results, None, {"structure": STRUCTURE_TOL}, started))
    return EXIT_OK if results["passed"] else EXIT_INVALID


def cmd_check(args) -> int:
    started = time.perf_counter()
    code, loaded = _load(args.model_file, validate=True)
    if loaded is None:
        return code
    descriptor, model = loaded
    try:
        R, S = curvature_for(args.engine, descriptor, model)
    except EngineMismatchError as exc:
        _err(f"engine/model mismatch: {exc}")
        return EXIT_INVALID
    config = OssermanConfig(count=args.count, seed=args.seed, tol=args.tol)
    check = check_phi_null_osserman if args.mode == "phi-null" else check_null_osserman
    verdict = check(R, S, config)
    curv = validate_curvature_like(R)
    results = {
        "engine": args.engine,
        "mode": args.mode,
        "verdict": verdict.as_dict(),
        "curvature_like": curv.as_dict(),
    }
    _err(
        f"model {descriptor.name}  engine {args.engine}  mode {args.mode}",
        f"reference spectrum {verdict.reference_spectrum}",
        f"samples {verdict.samples}  worst deviation {verdict.worst_deviation:.3e}  tol {args.tol:g}",
        f"verdict {'PASS' if verdict.passed else 'FAIL'}",
    )
    if verdict.witness is not None:
        nd, spec = verdict.witness
        _err(f"witness u = {[round(float(a), 10) for a in nd.u]}  spectrum {spec}")
    tolerances = {"verdict": args.tol, "curvature_like": 1e-9}
    _emit(_report("check", descriptor.as_dict(), results, args.seed, tolerances, started))
    return EXIT_OK if verdict.passed else EXIT_VERDICT


def cmd_reproduce(args) -> int:
    started = time.perf_counter()
    config = OssermanConfig(count=args.count, seed=args.seed, tol=args.tol)
    rows = TABLES[args.table](config)
    passed = all(r["passed"] for r in rows)
    _err(f"{'row':52s} {'deviation':>11s}  status")
    for r in rows:
        _err(f"{r['label']:52s} {r['deviation']:11.3e}  {'ok' if r['passed'] else 'FAIL'}")
    results = {"table": args.table, "rows": rows, "passed": passed}
    _emit(_report("reproduce", None, results, args.seed, {"verdict": args.tol}, started))
    return EXIT_OK if passed else EXIT_VERDICT


def _sampling_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--count", type=int, default=OssermanConfig.count, help="random sample count (default %(default)s)")
    p.add_argument("--seed", type=int, default=OssermanConfig.seed, help="sampler seed (default %(default)s)")
    p.add_argument("--tol", type=float, default=None, help="eigenvalue tolerance (default 1e-7 or $OSSERMAN_TOL)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nullosserman", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the structure axioms of a model file")
    p.add_argument("model_file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="decide (phi-)null Osserman for a model file")
    p.add_argument("model_file")
    p.add_argument("--engine", choices=ENGINES, required=True)
    p.add_argument("--mode", choices=MODES, default="phi-null")
    _sampling_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reproduce", help="published value vs computed value tables")
    p.add_argument("--table", choices=sorted(TABLES), required=True)
    _sampling_flags(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", None) is None and hasattr(args, "tol"):
        args.tol = default_tol()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
