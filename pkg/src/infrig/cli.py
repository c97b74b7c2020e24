"""Command-line interface: ``infrig <subcommand> ...``.

Exit status is 0 on success, 1 when a verified property fails or a load
cannot be resolved, and 2 on bad input.  Reports go to standard output as
JSON with sorted keys; diagnostics go to standard error as JSON.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import EXAMPLE_IDS, ExampleSpec, make_example
from .errors import RigidityError
from .framework import (
    Framework,
    Geometry,
    dumps,
    field_to_dict,
    framework_to_dict,
    parse_field,
    parse_framework,
    stress_to_dict,
)
from .linalg import Tolerance
from .pogorelov import central_project, fit_disk, pogorelov_transport
from .projective import apply_projective, parse_projective_map, transport_load, transport_motion
from .rigidity import (
    analyze_kinematics,
    analyze_statics,
    edge_residuals,
    is_equilibrium_load,
    resolve_load,
)
from .verify import PROPERTIES, run_property

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad command-line input (mapped to exit status 2)."""


def _tolerance(args) -> Tolerance:
    if args.exact:
        return Tolerance("exact")
    return Tolerance("floating", args.tolerance)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _framework(path: str) -> Framework:
    return parse_framework(_read_text(path))


def _field(path: str, fw: Framework | None = None) -> np.ndarray:
    return parse_field(_read_text(path), fw)


def _residuals(fw: Framework, Q) -> list[float]:
    return [float(v) for v in edge_residuals(fw, Q)]


def _emit(doc) -> None:
    sys.stdout.write(dumps(doc) + "\n")


# -- subcommands -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    fw = _framework(args.framework)
    tol = _tolerance(args)
    kin = analyze_kinematics(fw, tol)
    report = {"geometry": fw.geometry.value, "mode": tol.mode, "n_vertices": fw.n_vertices, "n_edges": fw.n_edges}
    report.update(kin.to_dict())
    report["motion_basis"] = [field_to_dict(Q)["field"] for Q in kin.motion_basis]
    if fw.geometry is Geometry.EUCLIDEAN and not kin.degenerate_span:
        report["statics"] = analyze_statics(fw, tol).to_dict()
    if args.sv_csv:
        with open(args.sv_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "singular_value"])
            for k, s in enumerate(kin.singular_values):
                writer.writerow([k, repr(float(s))])
    _emit(report)
    return EXIT_OK


def cmd_resolve(args) -> int:
    fw = _framework(args.framework)
    F = _field(args.load, fw)
    tol = _tolerance(args)
    result = resolve_load(fw, F, tol)
    report = {"equilibrium": is_equilibrium_load(fw, F, tol), "resolvable": bool(result)}
    if result:
        report.update(stress_to_dict(result))
    else:
        report["residual"] = result.residual
    _emit(report)
    return EXIT_OK if result else EXIT_VIOLATION


def cmd_transform(args) -> int:
    fw = _framework(args.framework)
    phi = parse_projective_map(_read_text(args.map))
    image = apply_projective(phi, fw)
    report = {"framework": framework_to_dict(image)}
    if args.motion:
        Q = transport_motion(phi, fw, _field(args.motion, fw))
        report["motion"] = field_to_dict(Q)["field"]
        report["edge_residuals"] = _residuals(image, Q)
    if args.load:
        F = transport_load(phi, fw, _field(args.load, fw))
        report["load"] = field_to_dict(F)["field"]
        report["load_equilibrium"] = is_equilibrium_load(image, F)
        report["load_resolvable"] = bool(resolve_load(image, F))
    _emit(report)
    return EXIT_OK


def cmd_pogorelov(args) -> int:
    fw = _framework(args.framework)
    if fw.geometry is not Geometry.EUCLIDEAN:
        raise InputError("pogorelov expects a Euclidean framework")
    if args.fit_disk is not None:
        fw = fit_disk(fw, args.fit_disk)
    target = Geometry(args.target)
    image = central_project(fw, target)
    report = {"framework": framework_to_dict(image), "euclidean": framework_to_dict(fw)}
    if args.field:
        if args.direction == "to":
            Q = pogorelov_transport(fw, _field(args.field, fw), "to_" + target.value)
            report["field"] = field_to_dict(Q)["field"]
            report["edge_residuals"] = _residuals(image, Q)
        else:
            Q = pogorelov_transport(fw, _field(args.field, image), "from_" + target.value)
            report["field"] = field_to_dict(Q)["field"]
            report["edge_residuals"] = _residuals(fw, Q)
    _emit(report)
    return EXIT_OK


def _param_value(text: str):
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError:
        if text.lower() in ("true", "false"):
            return text.lower() == "true"
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            return text


def cmd_catalog(args) -> int:
    params = {}
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        params[key] = _param_value(value)
    fw = make_example(ExampleSpec(args.example, params))
    _emit(framework_to_dict(fw))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_property(args.property, trials=args.trials, seed=args.seed, dump_dir=args.dump_dir)
    _emit(report)
    return EXIT_OK if report["failed"] == 0 else EXIT_VIOLATION


# -- parser ----------------------------------------------------------------------

def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from exc
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("radius must lie in (0, 1)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infrig", description="Infinitesimal rigidity of bar-joint frameworks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def numeric(p):
        p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
        p.add_argument("--tolerance", type=float, default=1e-10, help="relative singular-value cutoff")

    p = sub.add_parser("analyze", help="kinematic and static degrees of freedom")
    p.add_argument("framework")
    numeric(p)
    p.add_argument("--sv-csv", metavar="PATH", help="write singular values of the rigidity matrix")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("resolve", help="find a stress resolving a load")
    p.add_argument("framework")
    p.add_argument("load")
    numeric(p)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("transform", help="apply a projective map and transport fields")
    p.add_argument("framework")
    p.add_argument("map")
    p.add_argument("--motion", metavar="FIELD")
    p.add_argument("--load", metavar="FIELD")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("pogorelov", help="central projection and velocity transport")
    p.add_argument("framework")
    p.add_argument("--target", choices=["hyperbolic", "spherical"], required=True)
    p.add_argument("--fit-disk", type=_positive_fraction, metavar="R")
    p.add_argument("--field", metavar="FIELD")
    p.add_argument("--direction", choices=["to", "from"], default="to")
    p.set_defaults(func=cmd_pogorelov)

    p = sub.add_parser("catalog", help="emit an example framework")
    p.add_argument("example", choices=EXAMPLE_IDS)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="seeded property checks")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-dir", metavar="DIR", help="write failing instances here")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, RigidityError, ValueError, OSError) as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
