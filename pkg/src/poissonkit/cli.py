"""Command-line entry point.

Exit codes: 0 on success, 1 when an analysis verdict fails, 2 on input or usage errors.
"""
import argparse
import json
import sys
import time

from . import analyses, catalogue, dsl
from .errors import PoissonKitError
from .report import Report, digest


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="offset of the sample grid")
    p.add_argument("--grid", type=int, default=None, metavar="N", help="sample values per coordinate")
    p.add_argument("--tol", type=float, default=1e-9, help="tolerance for floating-point inputs")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="poissonkit", description="Poisson submanifold and submersion analyses")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="Jacobi identity and Poisson-map checks")
    p.add_argument("file")

    p = sub.add_parser("classify", parents=[common], help="submanifold hierarchy")
    p.add_argument("file")
    p.add_argument("--name", help="only this [submanifold NAME]")

    p = sub.add_parser("submersion", parents=[common], help="fibres, pencils, couplings and flows")
    p.add_argument("file")
    p.add_argument("--name", help="only this [submersion NAME]")
    p.add_argument("--almost-coupling", action="store_true", help="search for an almost-coupling connection")

    p = sub.add_parser("toric", parents=[common], help="Delzant polytopes")
    p.add_argument("polytope", help="JSON file, or one of: interval, triangle, square, skew-triangle")
    for flag in ("leaves", "strata", "kernel", "delzant"):
        p.add_argument("--" + flag, action="store_true")

    p = sub.add_parser("lie", parents=[common], help="Manin triples and quotient conditions")
    p.add_argument("file", nargs="?", help="JSON algebra with pairing and optional g, h")
    p.add_argument("--standard", choices=("A1", "A2"))
    p.add_argument("--k", choices=("t", "0", "g"), default="t", help="quotient subalgebra for --standard")
    p.add_argument("--spectral", type=int, default=0, metavar="N", help="N random spectrum checks")

    p = sub.add_parser("leaves", parents=[common], help="leaf counts of associated bundles")
    p.add_argument("file", nargs="?", help="JSON with base, fibers and tag")
    p.add_argument("--base", type=int, help="leaf count of the base")
    p.add_argument("--fiber", type=int, action="append", help="leaf count of a fibre (repeatable)")
    p.add_argument("--tag", help="hypothesis tag")

    p = sub.add_parser("example", parents=[common], help="fixture catalogue")
    esub = p.add_subparsers(dest="action", required=True)
    esub.add_parser("list", parents=[common])
    r = esub.add_parser("run", parents=[common])
    r.add_argument("id", nargs="?")
    r.add_argument("--all", action="store_true")
    return parser


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _opts(args):
    return analyses.Options(seed=args.seed, per_dim=args.grid, tol=args.tol, name=getattr(args, "name", None),
                            almost_coupling=getattr(args, "almost_coupling", False))


def _render_text(rep):
    lines = [f"verdict: {'pass' if rep.ok else 'fail'}"]
    for key, value in sorted(rep.to_json()["result"].items()):
        lines.append(f"{key}: {json.dumps(value, sort_keys=True, default=str)}")
    return "\n".join(lines)


def _emit(rep, args, text=None):
    if args.format == "json":
        print(rep.dumps())
    else:
        print(text if text is not None else _render_text(rep))
    return 0 if rep.ok else 1


def _dsl_command(args, fn):
    text = _read(args.file)
    doc = dsl.parse_document(text)
    start = time.perf_counter()
    result, ok = fn(doc, _opts(args))
    return Report(args.command, digest(text), args.seed, ok, result, _timing(args, start))


def _timing(args, start):
    return {"seconds": round(time.perf_counter() - start, 3)} if args.timing else None


def cmd_toric(args):
    poly, text = analyses.polytope_from_arg(args.polytope)
    what = [f for f in ("leaves", "strata", "kernel", "delzant") if getattr(args, f)]
    start = time.perf_counter()
    result, ok = analyses.run_toric(poly, what or ("leaves", "strata", "kernel", "delzant"))
    rep = Report("toric", digest(text), args.seed, ok, result, _timing(args, start))
    if what == ["leaves"]:
        return _emit(rep, args, str(result["leaf_count"]))
    return _emit(rep, args)


def cmd_lie(args):
    start = time.perf_counter()
    if args.standard:
        result, ok = analyses.run_lie(triple_kind=args.standard, k_choice=args.k, spectral=args.spectral,
                                      seed=args.seed)
        text = args.standard
    elif args.file:
        text = _read(args.file)
        result, ok = analyses.run_lie(data=json.loads(text))
    else:
        raise PoissonKitError("lie needs a JSON file or --standard")
    return _emit(Report("lie", digest(text), args.seed, ok, result, _timing(args, start)), args)


def cmd_leaves(args):
    if args.file:
        text = _read(args.file)
        data = json.loads(text)
    elif args.base is not None and args.fiber:
        data = {"base": {"count": args.base}, "tag": args.tag,
                "fibers": [{"count": f, "label": f"fibre {i + 1}"} for i, f in enumerate(args.fiber)]}
        text = json.dumps(data, sort_keys=True)
    else:
        raise PoissonKitError("leaves needs a JSON file or --base with --fiber")
    result, ok = analyses.run_leaves(data)
    rep = Report("leaves", digest(text), args.seed, ok, result)
    counts = " ".join(str(b["total_leaves"]) for b in result["bundles"])
    return _emit(rep, args, counts)


def cmd_example(args):
    if args.action == "list":
        if args.format == "json":
            print(json.dumps([{"id": f.id, "mode": f.mode, "note": f.note} for f in catalogue.FIXTURES],
                             indent=2, sort_keys=True))
        else:
            for f in catalogue.FIXTURES:
                print(f"{f.id}\t{f.mode}\t{f.note}")
        return 0
    if args.all:
        ids = catalogue.list_fixtures()
    elif args.id:
        ids = [args.id]
    else:
        raise PoissonKitError("example run needs an id or --all")
    failed = 0
    reports = []
    for fid in ids:
        res = catalogue.run_fixture(fid, seed=args.seed, timing=args.timing)
        failed += not res.passed
        if args.format == "json":
            out = res.report.to_json()
            out["expected_mismatches"] = res.mismatches
            reports.append(out)
        else:
            print(f"{'PASS' if res.passed else 'FAIL'} {fid}")
            for m in res.mismatches:
                print(f"    {m}")
    if args.format == "json":
        print(json.dumps(reports if len(reports) > 1 else reports[0], indent=2, sort_keys=True, default=str))
    elif len(ids) > 1:
        print(f"{len(ids) - failed}/{len(ids)} fixtures pass")
    return 1 if failed else 0


def dispatch(args):
    if args.command == "check":
        return _emit(_dsl_command(args, analyses.run_check), args)
    if args.command == "classify":
        return _emit(_dsl_command(args, analyses.run_classify), args)
    if args.command == "submersion":
        return _emit(_dsl_command(args, analyses.run_submersion), args)
    if args.command == "toric":
        return cmd_toric(args)
    if args.command == "lie":
        return cmd_lie(args)
    if args.command == "leaves":
        return cmd_leaves(args)
    return cmd_example(args)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return dispatch(args)
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=sys.stderr)
    except (PoissonKitError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
