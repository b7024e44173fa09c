"""Command line front end.

Verbs: outer, dfamily, erbound, oracle, plot, check. Exit codes: 0 ok,
1 check failure, 2 parse error, 3 unsupported mode, 4 enumeration cap.
The SUBDIFF_SEED environment variable overrides the default seed; an
explicit --seed flag overrides both. Every randomized result records the
seed used.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import checks, errorbound, geometry, io, model, oracle, outer, plot

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_CAP = 4


class _Unsupported(Exception):
    pass


def _default_seed():
    raw = os.environ.get("SUBDIFF_SEED")
    if raw is None:
        return oracle.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise io.ParseError("SUBDIFF_SEED", "expected an integer, got %r" % raw)


def _emit(obj, out_path):
    if out_path:
        io.dump(obj, out_path)
    else:
        json.dump(obj, sys.stdout, indent=1)
        sys.stdout.write("\n")


def _parse_radii(raw):
    try:
        radii = tuple(float(tok) for tok in raw.split(","))
    except ValueError:
        raise io.ParseError("--radii", "expected comma-separated numbers")
    return radii


def _exact_union(fn):
    if fn.dim > 2:
        raise _Unsupported("exact sweep supports dimension <= 2, "
                           "problem has dimension %d" % fn.dim)
    return outer.outer_limit_exact_2d(fn, fn.basepoint, with_closure=True)


def cmd_outer(args):
    fn, _ = io.load_problem(args.problem)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.mode == "exact2d":
        if fn.dim > 2:
            raise _Unsupported("exact sweep supports dimension <= 2, "
                               "problem has dimension %d" % fn.dim)
        U = outer.outer_limit_exact_2d(fn, fn.basepoint,
                                       with_closure=args.closure)
        result = io.outer_result_json(U, args.closure, "exact2d")
        cloud = None
    else:
        pts = outer.outer_limit_sampled(fn, fn.basepoint, n_dirs=args.dirs,
                                        seed=seed)
        U = geometry.FaceUnion(())
        cloud = [tuple(float(c) for c in p) for p in pts]
        result = {"mode": "sample", "dirs": args.dirs, "seed": seed,
                  "n_points": len(cloud), "points": [list(p) for p in cloud]}
    _emit(result, args.out)
    if args.svg:
        plot.write_svg(args.svg, U, cloud=cloud,
                       title="outer limit (%s)" % args.mode)
    return EXIT_OK


def cmd_dfamily(args):
    with open(args.problem) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as err:
            raise io.ParseError("%s:%d:%d" % (args.problem, err.lineno,
                                              err.colno), err.msg)
    if isinstance(raw, dict) and "gradients" in raw:
        from .exact import parse_scalar
        try:
            grads = [tuple(parse_scalar(v, True) for v in row)
                     for row in raw["gradients"]]
        except ValueError as err:
            raise io.ParseError("$.gradients", str(err))
    else:
        fn, _ = io.parse_problem(raw)
        if len(fn.components) != 1 or fn.components[0].kind != "max_affine":
            raise _Unsupported("subset enumeration needs a gradient list or "
                               "a single max-affine component")
        grads = [p.a for p in fn.components[0].pieces]
    family = outer.enumerate_D(grads, cap=args.cap)
    _emit(io.dfamily_result_json(family), args.out)
    return EXIT_OK


def cmd_erbound(args):
    fn, _ = io.load_problem(args.problem)
    seed = args.seed if args.seed is not None else _default_seed()
    U = _exact_union(fn)
    report = errorbound.lower_bound_from_outer(U)
    if args.empirical:
        emp = oracle.empirical_error_bound_modulus(fn, fn.basepoint, seed=seed)
        report = errorbound.attach_empirical(report, emp.estimate)
        result = io.erbound_result_json(report)
        result["per_radius_min_ratio"] = list(emp.per_radius_min_ratio)
        result["seed"] = seed
    else:
        result = io.erbound_result_json(report)
    _emit(result, args.out)
    return EXIT_OK


def cmd_oracle(args):
    fn, _ = io.load_problem(args.problem)
    seed = args.seed if args.seed is not None else _default_seed()
    radii = _parse_radii(args.radii)
    cloud = oracle.sample_limsup(fn, fn.basepoint, radii=radii,
                                 dirs_per_radius=args.dirs, seed=seed)
    emp = oracle.empirical_error_bound_modulus(fn, fn.basepoint, radii=radii,
                                               dirs_per_radius=args.dirs,
                                               seed=seed)
    meta = {}
    if fn.dim <= 2:
        U = outer.outer_limit_exact_2d(fn, fn.basepoint, with_closure=True)
        pts = cloud.limit_points()
        if not U.is_empty and len(pts):
            d_uc, d_cu = geometry.hausdorff_cloud(U, pts)
            meta = {"hausdorff_exact_to_cloud": d_uc,
                    "hausdorff_cloud_to_exact": d_cu}
    _emit(io.oracle_result_json(cloud, seed, emp, **meta), args.out)
    return EXIT_OK


def cmd_plot(args):
    with open(args.result) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as err:
            raise io.ParseError("%s:%d:%d" % (args.result, err.lineno,
                                              err.colno), err.msg)
    if not isinstance(raw, dict):
        raise io.ParseError("$", "expected a result object")
    if "outer_limit" in raw:
        U = io.union_from_json(raw["outer_limit"], "$.outer_limit")
    elif "points" in raw or "cloud" in raw:
        U = geometry.FaceUnion(())
    else:
        raise io.ParseError("$.outer_limit", "missing field")
    cloud = None
    if "cloud" in raw:
        cloud = [g for g, _, _ in raw["cloud"]]
    elif "points" in raw:
        cloud = raw["points"]
    plot.write_svg(args.out, U, cloud=cloud, title=args.title)
    return EXIT_OK


def cmd_check(args):
    try:
        results = checks.run_all(args.fixtures)
    except checks.MissingFixture as err:
        print("Bail out! %s" % err)
        return EXIT_CHECK
    expected = checks.compare_expected(args.fixtures)
    total = len(results) + len(expected)
    print("1..%d" % total)
    failed = []
    for r in results:
        status = "ok" if r.passed else "not ok"
        note = "" if r.within_budget else " (over %.0fs budget)" % r.budget
        print("%s %d - %s: %s (%.2fs)%s"
              % (status, r.number, r.name, r.detail, r.elapsed, note))
        if not r.passed:
            failed.append(r.name)
    for k, (name, ok, detail) in enumerate(expected):
        status = "ok" if ok else "not ok"
        print("%s %d - expected-%s: %s" % (status, len(results) + 1 + k,
                                           name, detail))
        if not ok:
            failed.append("expected-" + name)
    if failed:
        print("# failed: %s" % ", ".join(failed))
        return EXIT_CHECK
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="subdiff",
        description="Outer limits of subdifferentials for min-max functions, "
                    "with sampled validation and error-bound lower bounds.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("outer", help="outer limit of subdifferentials")
    p.add_argument("problem")
    p.add_argument("--mode", choices=("exact2d", "sample"), default="exact2d")
    p.add_argument("--dirs", type=int, default=10000,
                   help="directions for sampled mode")
    p.add_argument("--closure", action="store_true",
                   help="apply topological closure to the union")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write result JSON here instead of stdout")
    p.add_argument("--svg", help="also render the set to this SVG file")
    p.set_defaults(run=cmd_outer)

    p = sub.add_parser("dfamily", help="feasible index subsets with certificates")
    p.add_argument("problem", help="problem file or {\"gradients\": [...]}")
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(run=cmd_dfamily)

    p = sub.add_parser("erbound", help="error bound lower bound from the outer limit")
    p.add_argument("problem")
    p.add_argument("--empirical", action="store_true",
                   help="attach the sampled modulus estimate")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(run=cmd_erbound)

    p = sub.add_parser("oracle", help="shell-sampling cloud and modulus estimate")
    p.add_argument("problem")
    p.add_argument("--radii", default="1e-1,1e-2,1e-3,1e-4")
    p.add_argument("--dirs", type=int, default=oracle.DEFAULT_DIRS)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("plot", help="render a result JSON to SVG")
    p.add_argument("result")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.set_defaults(run=cmd_plot)

    p = sub.add_parser("check", help="run the golden-fixture acceptance suite")
    p.add_argument("--fixtures", default="fixtures")
    p.set_defaults(run=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except io.ParseError as err:
        print("parse error: %s" % err, file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as err:
        print("parse error: cannot open %s" % err.filename, file=sys.stderr)
        return EXIT_PARSE
    except _Unsupported as err:
        print("unsupported: %s" % err, file=sys.stderr)
        return EXIT_UNSUPPORTED
    except outer.EnumerationCapExceeded as err:
        print("enumeration cap: %s" % err, file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
