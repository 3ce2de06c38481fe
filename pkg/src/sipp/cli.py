"""Command-line entry point.

Every subcommand emits machine-readable JSON by default (``--format text``
for a terse human summary).  Exit codes separate mathematical negatives from
operational failures: 0 = success / positive verdict, 1 = checked-and-false
(NotSIPP, blocked pattern, failed realization), 2 = input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import catalog, constructions, realize, verification
from .errors import ObstructionError, SippError
from .linalg import (DEFAULT_TOL, Mat, matrix_to_jsonable, read_matrix,
                     write_matrix)
from .signpat import SignPattern
from .sipp_core import Verdict, has_sipp, has_sipp_square_via_inverse


def _read_pattern(path) -> SignPattern:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        return SignPattern.from_rows(json.loads(text))
    return SignPattern.from_text(text)


def _read_matrix_mode(path, mode: str) -> Mat:
    m = read_matrix(path)
    if mode == "exact" and not m.exact:
        raise SippError("exact mode rejects float-formatted input files")
    if mode == "float":
        return m.to_float()
    return m


def _emit(obj, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        for line in text_lines:
            print(line)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["auto", "exact", "float"], default="auto",
                   help="scalar mode for matrix files (default: as stored)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="float comparison tolerance")
    p.add_argument("--res", type=float, default=1e-10,
                   help="orthogonality residual bound")
    p.add_argument("--format", choices=["json", "text"], default="json")


def _cmd_check_sipp(args) -> int:
    m = _read_matrix_mode(args.matrix, args.mode)
    if args.route == "inverse":
        cert = has_sipp_square_via_inverse(m, args.tol)
    else:
        cert = has_sipp(m, args.tol)
    obj = cert.to_jsonable(include_witness=args.emit_witness)
    _emit(obj, args.format, [f"verdict: {cert.verdict.value}",
                             f"system rank: {cert.system_rank}"])
    return 0 if cert.verdict is Verdict.HAS_SIPP else 1


def _cmd_verif_matrix(args) -> int:
    q = _read_matrix_mode(args.matrix, args.mode)
    if args.kind == "tangent":
        p = verification.orthogonal_completion(q, args.tol)
        lab = (verification.tangent_verification_matrix(q, p, args.tol)
               if args.restricted else
               verification.tangent_space_matrix(q, p, args.tol))
    else:
        lab = (verification.normal_verification_matrix(q, args.tol)
               if args.restricted else
               verification.normal_space_matrix(q, args.tol))
    print(lab.to_csv())
    return 0


def _cmd_liberate(args) -> int:
    q = _read_matrix_mode(args.matrix, args.mode)
    spec = args.direction
    if spec.startswith("skew:"):
        k = read_matrix(spec[len("skew:"):])
        qk = q if q.exact == k.exact else q.to_float()
        kk = k if q.exact == k.exact else k.to_float()
        direction = verification.TangentDirection(kk @ qk, kk)
    else:
        direction = verification.TangentDirection(read_matrix(spec))
    result = verification.liberate(q, direction, args.tol)
    obj = {"certified": result.certified,
           "pattern": result.pattern.to_json_grid(),
           "system_rank": result.system_rank,
           "mll_agrees": result.mll_agrees}
    _emit(obj, args.format, [f"certified: {result.certified}",
                             "pattern:", result.pattern.to_text()])
    return 0 if result.certified else 1


def _cmd_realize(args) -> int:
    q = _read_matrix_mode(args.seed, args.mode)
    target = _read_pattern(args.target)
    result = realize.realize_superpattern(q, target, eps0=args.eps0,
                                          res=args.res, tol=args.tol)
    obj = {"success": result.success,
           "epsilon": result.epsilon,
           "residual": result.residual,
           "det_sign": result.det_sign,
           "achieved": result.achieved.to_json_grid(),
           "matrix": matrix_to_jsonable(result.qstar),
           "detail": result.detail}
    _emit(obj, args.format, [f"success: {result.success}",
                             f"epsilon: {result.epsilon}",
                             f"residual: {result.residual:.3e}"])
    return 0 if result.success else 1


def _cmd_construct(args) -> int:
    if args.family == "hessenberg":
        mat = constructions.hessenberg_orthogonal(args.n, normalized=args.normalized)
    elif args.family == "hollow":
        mat = constructions.hollow_orthogonal(args.n)
    elif args.family == "merge":
        a = read_matrix(args.inputs[0])
        b = read_matrix(args.inputs[1])
        mat = (constructions.merge_row_orthogonal(a, b)
               if args.general else constructions.merge_hollow(a, b))
    elif args.family == "cayley":
        k = read_matrix(args.inputs[0])
        eps = Fraction(args.eps) if k.exact else float(Fraction(args.eps))
        mat = constructions.cayley(k, eps)
    else:  # pragma: no cover - argparse restricts choices
        raise SippError(f"unknown construction {args.family}")
    if args.out:
        write_matrix(args.out, mat)
    else:
        print(json.dumps(matrix_to_jsonable(mat)))
    return 0


def _cmd_classify(args) -> int:
    s = _read_pattern(args.pattern)
    c = catalog.classify(s, numeric=not args.no_numeric, tol=args.tol, res=args.res)
    obj = c.to_jsonable()
    if not args.emit_realization:
        obj["realization"] = None
    _emit(obj, args.format, [f"status: {c.status}",
                             f"provenance: {c.provenance}",
                             f"violated: {c.violated}"])
    return 1 if c.status == catalog.BLOCKED else 0


def _cmd_atlas(args) -> int:
    entries = catalog.build_atlas(args.m, args.n, max_zeros=args.max_zeros,
                                  numeric=not args.no_numeric,
                                  tol=args.tol, res=args.res)
    problems = catalog.audit_atlas(entries, args.tol, args.res)
    catalog.save_atlas(args.out, entries)
    counts = {}
    for e in entries:
        counts[e.status] = counts.get(e.status, 0) + 1
    obj = {"classes": len(entries), "counts": counts,
           "audit_violations": problems, "out": args.out}
    _emit(obj, args.format, [f"classes: {len(entries)}", f"counts: {counts}",
                             f"audit violations: {len(problems)}"])
    return 0 if not problems else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sipp",
        description="Sign patterns of row orthogonal matrices: certificates, "
                    "constructions, and realization.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-sipp", help="decide the SIPP of a matrix file")
    p.add_argument("matrix")
    p.add_argument("--emit-witness", action="store_true")
    p.add_argument("--route", choices=["symmetric", "inverse"], default="symmetric")
    _add_common(p)
    p.set_defaults(fn=_cmd_check_sipp)

    p = sub.add_parser("verif-matrix", help="emit a labeled verification matrix as CSV")
    p.add_argument("matrix")
    p.add_argument("--kind", choices=["tangent", "normal"], required=True)
    p.add_argument("--restricted", action="store_true",
                   help="restrict rows to the zero (tangent) / support (normal) positions")
    _add_common(p)
    p.set_defaults(fn=_cmd_verif_matrix)

    p = sub.add_parser("liberate", help="certify super patterns along a tangent direction")
    p.add_argument("matrix")
    p.add_argument("--direction", required=True,
                   help="matrix file with B, or skew:<file> with K (B = K Q)")
    _add_common(p)
    p.set_defaults(fn=_cmd_liberate)

    p = sub.add_parser("realize", help="realize a target super pattern from a seed")
    p.add_argument("seed")
    p.add_argument("--target", required=True, help="sign pattern file")
    p.add_argument("--eps0", type=float, default=0.25)
    _add_common(p)
    p.set_defaults(fn=_cmd_realize)

    p = sub.add_parser("construct", help="build a matrix from a named family")
    p.add_argument("family", choices=["hessenberg", "hollow", "merge", "cayley"])
    p.add_argument("inputs", nargs="*", help="input matrix files (merge, cayley)")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--general", action="store_true",
                   help="merge: use the general row orthogonal merge")
    p.add_argument("--eps", default="1/4", help="cayley: rational step size")
    p.add_argument("--out", help="write the matrix JSON here instead of stdout")
    _add_common(p)
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("classify", help="classify a sign pattern")
    p.add_argument("pattern")
    p.add_argument("--no-numeric", action="store_true")
    p.add_argument("--emit-realization", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("atlas", help="build and audit an atlas of small patterns")
    sub2 = p.add_subparsers(dest="atlas_command", required=True)
    pb = sub2.add_parser("build")
    pb.add_argument("--m", type=int, required=True)
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--max-zeros", type=int, default=None)
    pb.add_argument("--out", required=True)
    pb.add_argument("--no-numeric", action="store_true")
    _add_common(pb)
    pb.set_defaults(fn=_cmd_atlas)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ObstructionError as exc:
        print(json.dumps({"error": str(exc),
                          "obstructions": [{"labels": list(map(list, o.labels)),
                                            "vector": [float(x) for x in o.vector]}
                                           for o in exc.obstructions]}),
              file=sys.stderr)
        return 1
    except SippError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
