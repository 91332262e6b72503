"""Command-line front end.

Every command prints one canonical JSON document on stdout. Exit status is
0 when the command succeeded and any check held, 1 when a check failed
(witnesses are in the output), 2 for malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import atiyah, correspondence, obstruction_p1, truncated_lie
from .serialize import (
    FormatError,
    algebra_to_json,
    dumps,
    frame_from_json,
    liemap_from_json,
    liemap_to_json,
    parse_rational,
    rational_str,
    rep_from_json,
    rep_to_json,
)

EXIT_OK, EXIT_FAILED, EXIT_MALFORMED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path: str, what: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(what, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(what, f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from None


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------- algebra

def cmd_algebra(args):
    alg = truncated_lie.build_algebra(args.dim, args.trunc)
    if args.action == "info":
        return {
            "d": alg.d,
            "N": alg.N,
            "dim": len(alg),
            "dim_formula": truncated_lie.algebra_dimension(alg.d, alg.N),
            "weights": sorted({b.circle_weight for b in alg.basis}),
        }, EXIT_OK
    if args.action == "basis":
        return {"d": alg.d, "N": alg.N, "basis": algebra_to_json(alg)["basis"]}, EXIT_OK
    if args.action == "brackets":
        return algebra_to_json(alg), EXIT_OK
    if args.action == "derived":
        depth = args.depth
        series = truncated_lie.derived_series_all(alg, depth)
        return {
            "d": alg.d,
            "N": alg.N,
            "series": [
                {"k": k, "dim": s.dimension, "weights": s.weights()} for k, s in enumerate(series)
            ],
        }, EXIT_OK
    if args.action == "abelianization":
        ab = truncated_lie.abelianization(alg)
        return {
            "d": alg.d,
            "N": alg.N,
            "commutator_dim": ab.commutator.dimension,
            "quotient_dim": ab.quotient_dimension,
            "weight_zero_complement": ab.weight_zero_complement,
        }, EXIT_OK
    raise UsageError(f"unknown algebra action {args.action!r}")


# ---------------------------------------------------------------- rep

def cmd_rep(args):
    rho = rep_from_json(_load(args.input, "--in"))
    if args.action == "validate":
        report = correspondence.validate_rep(rho)
        return report, _status(report["holds"])
    if args.action == "to-liemap":
        report = correspondence.validate_rep(rho)
        if not report["holds"]:
            return report, EXIT_FAILED
        L = correspondence.rep_to_liemap(rho, verify=False)
        check = atiyah.check_cocycle(L, args.degree_bound if args.degree_bound is not None else rho.N + 3)
        out = {"liemap": liemap_to_json(L), "cocycle": check}
        return out, _status(check["holds"])
    if args.action == "lemma21":
        report = correspondence.check_lemma21(rho)
        return report, _status(report["holds"])
    raise UsageError(f"unknown rep action {args.action!r}")


# ---------------------------------------------------------------- liemap

def cmd_liemap(args):
    L = liemap_from_json(_load(args.input, "--in"))
    if args.action == "cocycle":
        report = atiyah.check_cocycle(L, args.degree_bound)
        return report, _status(report["holds"])
    if args.action == "order":
        cocycle = atiyah.check_cocycle(L, args.degree_bound)
        report = correspondence.check_order_bound(L)
        report["cocycle_holds"] = cocycle["holds"]
        return report, _status(report["bound_ok"] and cocycle["holds"])
    if args.action == "flatness":
        A0 = L.connection_part()
        curv = atiyah.curvature(A0)
        report = atiyah.check_higher_flatness(L)
        report["curvature"] = [
            {"i": i + 1, "j": j + 1, "value": F} for (i, j), F in sorted(curv.items()) if F
        ]
        report["connection_flat"] = not report["curvature"]
        return report, _status(report["holds"] and report["connection_flat"])
    if args.action == "extract-rep":
        cocycle = atiyah.check_cocycle(L, args.degree_bound)
        if not cocycle["holds"]:
            return cocycle, EXIT_FAILED
        rho = correspondence.extract_rep(L, args.trunc, verify=False)
        report = correspondence.validate_rep(rho)
        return {"rep": rep_to_json(rho), "valid": report["holds"]}, _status(report["holds"])
    if args.action == "gauge":
        if args.frame is None:
            raise UsageError("liemap gauge needs --frame")
        g = frame_from_json(_load(args.frame, "--frame"))
        try:
            out = atiyah.gauge_transform(L, g, args.cutoff)
        except ValueError as exc:
            raise FormatError("--frame", str(exc)) from None
        return liemap_to_json(out), EXIT_OK
    raise UsageError(f"unknown liemap action {args.action!r}")


# ---------------------------------------------------------------- examples

def cmd_examples(args):
    params = {}
    if args.name == "densities":
        params = {"lam": parse_rational(args.lam, "--lambda"), "d": args.dim or 1}
    elif args.name == "omega1":
        params = {"d": args.dim or 1}
    elif args.name == "jets":
        params = {"n": args.n if args.n is not None else 2}
    elif args.name == "flat":
        params = {"r": args.rank or 2, "d": args.dim or 2}
    try:
        ex = correspondence.example_library(args.name, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    shown = {("lambda" if k == "lam" else k): v for k, v in params.items()}
    out = {"name": ex.name, "params": shown, "rep": rep_to_json(ex.rep), "liemap": liemap_to_json(ex.liemap)}
    if args.verify:
        out["checks"] = correspondence.verify_example(ex)
        return out, _status(out["checks"]["all"])
    return out, EXIT_OK


# ---------------------------------------------------------------- obstruction

def cmd_obstruction(args):
    rho = parse_rational(args.rho, "--rho")
    model = obstruction_p1.CechP1Model.standard(args.degree, rho)
    value = obstruction_p1.obstruction(model)
    out = {"degree": args.degree, "rho": rational_str(rho), "obstruction": rational_str(value.re)}
    if not args.split:
        return out, EXIT_OK
    split = obstruction_p1.split_cocycle(model, args.max_degree)
    if split is None:
        out["split"] = None
        return out, EXIT_FAILED
    c0, c1 = split
    out["split"] = {"a0": c0, "a1": c1}
    return out, EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="infeq", description="Exact checks for infinitesimally equivariant bundles on a polydisc.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pa = sub.add_parser("algebra", help="truncated Lie algebras of vector fields")
    pa.add_argument("action", choices=["info", "basis", "brackets", "derived", "abelianization"])
    pa.add_argument("--dim", type=int, required=True)
    pa.add_argument("--trunc", type=int, required=True)
    pa.add_argument("--depth", type=int, default=4)
    pa.set_defaults(func=cmd_algebra)

    pr = sub.add_parser("rep", help="representations of truncated algebras")
    pr.add_argument("action", choices=["validate", "to-liemap", "lemma21"])
    pr.add_argument("--in", dest="input", required=True)
    pr.add_argument("--degree-bound", type=int)
    pr.set_defaults(func=cmd_rep)

    pl = sub.add_parser("liemap", help="matrix differential operators")
    pl.add_argument("action", choices=["cocycle", "order", "flatness", "extract-rep", "gauge"])
    pl.add_argument("--in", dest="input", required=True)
    pl.add_argument("--frame")
    pl.add_argument("--degree-bound", type=int)
    pl.add_argument("--trunc", type=int)
    pl.add_argument("--cutoff", type=int)
    pl.set_defaults(func=cmd_liemap)

    pe = sub.add_parser("examples", help="named examples as (rep, liemap) pairs")
    pe.add_argument("name", choices=sorted(correspondence.EXAMPLES))
    pe.add_argument("--lambda", dest="lam", default="1")
    pe.add_argument("--dim", type=int)
    pe.add_argument("--n", type=int)
    pe.add_argument("--rank", type=int)
    pe.add_argument("--verify", action="store_true")
    pe.set_defaults(func=cmd_examples)

    po = sub.add_parser("obstruction", help="line-bundle obstruction on the projective line")
    po.add_argument("model", choices=["p1"])
    po.add_argument("--degree", type=int, required=True)
    po.add_argument("--rho", default="0")
    po.add_argument("--split", action="store_true")
    po.add_argument("--max-degree", type=int)
    po.set_defaults(func=cmd_obstruction)
    return p


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result, code = args.func(args)
    except FormatError as exc:
        stdout.write(dumps({"error": "malformed input", "field": exc.field, "message": exc.message}) + "\n")
        stderr.write(f"infeq: {exc}\n")
        return EXIT_MALFORMED
    except (UsageError, truncated_lie.ResourceLimitError, ValueError) as exc:
        stdout.write(dumps({"error": "usage", "message": str(exc)}) + "\n")
        stderr.write(f"infeq: {exc}\n")
        return EXIT_MALFORMED
    stdout.write(dumps(result) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
