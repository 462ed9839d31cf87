"""Command line front end.

Exit codes: 0 success or pass, 1 a verified failure (for example the link
condition fails), 2 invalid input.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from negcurv import io
from negcurv.comparison import comparison_complex, excess_angle, geodesic_excess
from negcurv.complex import check_link_condition, euler_characteristic, validate
from negcurv.geodesics import LoopError, check_loop, is_closed_geodesic, loop_length
from negcurv.gluing import SCHEMA_VERSION, GluingError, glue
from negcurv.hypgeom import TOL, GeometryError
from negcurv.recipes import RecipeError, double, graph_of_roses, rose
from negcurv.transverse import FullOverlap, TransversalityProblem, intersection_count, transversalize


class InputError(Exception):
    def __init__(self, message: str, location: str = "", witness: dict | None = None):
        super().__init__(message)
        self.location = location
        self.witness = witness


def _emit(obj) -> None:
    sys.stdout.write(io.dumps({"schema_version": SCHEMA_VERSION, **obj}))


def _load_complex(path: str, check: bool = True):
    K = io.complex_from_json(io.load_json(path))
    if check:
        diag = validate(K)
        if not diag.ok:
            raise InputError("invalid complex: " + "; ".join(diag.problems), path)
    return K


def link_json(rep) -> dict:
    return {
        "passed": rep.passed,
        "tolerance": rep.tol,
        "kbar": rep.kbar,
        "systole": rep.systoles,
        "margin": rep.margins,
        "failing": rep.failing,
    }


def cmd_validate(args) -> int:
    K = _load_complex(args.complex, check=False)
    diag = validate(K)
    out = {"command": "validate", "valid": diag.ok, "problems": diag.problems}
    if diag.ok:
        out["euler_characteristic"] = euler_characteristic(K)
    _emit(out)
    return 0 if diag.ok else 1


def cmd_check(args) -> int:
    K = _load_complex(args.complex)
    rep = check_link_condition(K, args.tolerance)
    _emit({"command": "check", **link_json(rep), "euler_characteristic": euler_characteristic(K)})
    return 0 if rep.passed else 1


def cmd_geodesic(args) -> int:
    K = _load_complex(args.complex)
    loop = io.loop_from_json(io.load_json(args.loop))
    try:
        check_loop(K, loop)
    except (LoopError, KeyError) as exc:
        raise InputError(str(exc), args.loop) from None
    chk = is_closed_geodesic(K, loop, args.tolerance)
    out = {
        "command": "geodesic",
        "loop": list(loop.edges),
        "geodesic": chk.ok,
        "angles": chk.angles,
        "margins": chk.margins,
        "length": loop_length(K, loop),
    }
    if chk.ok:
        out["excess"] = geodesic_excess(K, loop, tol=args.tolerance)
    _emit(out)
    return 0 if chk.ok else 1


def cmd_compare(args) -> int:
    K = _load_complex(args.complex)
    try:
        pair = comparison_complex(K, args.factor)
    except ValueError as exc:
        raise InputError(str(exc), "--factor") from None
    ex = excess_angle(pair)
    if args.out:
        io.write_json(args.out, io.complex_to_json(pair.compared))
    out = {"command": "compare", "factor": pair.factor, "excess_angle": ex.delta, "corners": ex.n_corners,
           "link_condition": check_link_condition(pair.compared, args.tolerance).passed}
    if not args.out:
        out["complex"] = io.complex_to_json(pair.compared)
    _emit(out)
    return 0


def cmd_transversalize(args) -> int:
    K = _load_complex(args.complex)
    loops = io.loops_from_json(io.load_json(args.loops))
    try:
        res = transversalize(TransversalityProblem(K, loops), args.factor, tol=args.tolerance)
    except FullOverlap as exc:
        _emit({"command": "transversalize", "ok": False, "error": str(exc), "witness": exc.witness})
        return 1
    except (LoopError, KeyError) as exc:
        raise InputError(str(exc), args.loops) from None
    if args.out:
        io.write_json(args.out, io.complex_to_json(res.complex))
    rep = check_link_condition(res.complex, args.tolerance)
    out = {
        "command": "transversalize",
        "ok": rep.passed and res.final_count == 0,
        "initial_intersections": res.initial_count,
        "final_intersections": intersection_count(res.loops, res.complex),
        "loops": [list(l.edges) for l in res.loops],
        "fins": [f.to_json() for f in res.fins],
        "retraction": {k: list(v) for k, v in sorted(res.retraction.items())},
        "euler_characteristic": euler_characteristic(res.complex),
        "link_condition": link_json(rep),
    }
    if not args.out:
        out["complex"] = io.complex_to_json(res.complex)
    _emit(out)
    return 0 if out["ok"] else 1


def cmd_glue(args) -> int:
    g = io.gos_from_json(io.load_json(args.gos))
    try:
        res = glue(g, args.factor, args.tolerance)
    except FullOverlap as exc:
        raise InputError(str(exc), "malnormal", exc.witness) from None
    except GluingError as exc:
        raise InputError(str(exc), exc.stage, exc.witness) from None
    if args.out:
        io.write_json(args.out, io.complex_to_json(res.complex))
    if args.report:
        io.write_json(args.report, res.report)
    _emit({"command": "glue", **res.report})
    return 0 if res.report["verdict"] == "pass" else 1


def _recipe_arg(arg: str):
    p = Path(arg)
    if p.suffix == ".json" or p.exists():
        return io.load_json(p)
    return arg


def cmd_recipe(args) -> int:
    spec = _recipe_arg(args.spec)
    try:
        if args.kind == "double":
            word, lengths = (spec, None) if isinstance(spec, str) else (spec.get("word"), spec.get("lengths"))
            if not isinstance(word, str):
                raise InputError("double needs a word", args.spec)
            obj = io.gos_to_json(double(word, lengths))
        elif args.kind == "rose":
            if isinstance(spec, str):
                n, lengths = int(spec), None
            else:
                n, lengths = int(spec.get("n", len(spec.get("lengths", [])))), spec.get("lengths")
            obj = io.complex_to_json(rose(n, lengths))
        else:
            if not isinstance(spec, dict):
                raise InputError("graph recipe needs a JSON spec file", args.spec)
            obj = io.gos_to_json(graph_of_roses(spec))
    except RecipeError as exc:
        raise InputError(str(exc), args.spec, exc.witness) from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed recipe: {exc}", args.spec) from None
    if args.out:
        io.write_json(args.out, obj)
    else:
        sys.stdout.write(io.dumps(obj))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="negcurv", description=__doc__.splitlines()[0])
    ap.add_argument("--tolerance", type=float, default=TOL, help="angle/length tolerance (default 1e-9)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check complex invariants")
    p.add_argument("complex")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="link condition with per-vertex margins")
    p.add_argument("complex")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("geodesic", help="is a loop a closed geodesic")
    p.add_argument("complex")
    p.add_argument("loop")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("compare", help="comparison complex and excess angle")
    p.add_argument("complex")
    p.add_argument("--factor", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("transversalize", help="glue fins until the loops are transverse")
    p.add_argument("complex")
    p.add_argument("loops")
    p.add_argument("--factor", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transversalize)

    p = sub.add_parser("glue", help="build and certify the glued complex")
    p.add_argument("gos")
    p.add_argument("--out")
    p.add_argument("--report")
    p.add_argument("--factor", type=float, default=0.5)
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("recipe", help="generate instances")
    p.add_argument("kind", choices=["double", "rose", "graph"])
    p.add_argument("spec", help="JSON spec file, or a word (double) / petal count (rose)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recipe)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not (args.tolerance > 0 and math.isfinite(args.tolerance)):
        print("negcurv: --tolerance must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        _emit({"command": args.command, "error": str(exc), "location": exc.location, "witness": exc.witness or {}})
        print(f"negcurv: {exc.location}: {exc}", file=sys.stderr)
        return 2
    except io.FormatError as exc:
        _emit({"command": args.command, "error": str(exc), "location": exc.location})
        print(f"negcurv: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, LoopError) as exc:
        _emit({"command": args.command, "error": str(exc)})
        print(f"negcurv: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
