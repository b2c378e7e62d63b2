"""Command-line front end: search, oracle sweeps, table builds.

Exit codes: 0 success, 2 usage error, 3 capacity error, 4 interrupted with
checkpoint written, 5 internal audit failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import oracle, pipeline, report
from .search import AlmostExample, Interrupted, SearchConfig, enumerate_relations
from .solver import AffineExpr, InstantiationError, SolutionFamily

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INTERRUPTED = 4
EXIT_AUDIT = 5


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zsumfree",
        description="minimal subset-sum counts of zero-sum-free sets in Z_n")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("search", help="enumerate almost-examples")
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--lmax", type=int, default=None,
                    help="class-count cap (default k(k+1)/2 - 1)")
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--no-symmetry", action="store_true")
    ps.add_argument("--no-anticlique", action="store_true")
    ps.add_argument("--no-memo", action="store_true")
    ps.add_argument("--checkpoint", metavar="PATH")
    ps.add_argument("--resume", metavar="PATH")
    ps.add_argument("--out", metavar="PATH")
    ps.add_argument("--format", choices=("text", "records"), default="text")

    po = sub.add_parser("oracle", help="brute-force f_n(k)")
    po.add_argument("--n", type=int)
    po.add_argument("--n-range", metavar="LO..HI")
    po.add_argument("--k", type=int, required=True)
    po.add_argument("--workers", type=int, default=1)
    po.add_argument("--format", choices=("text", "records"), default="text")
    po.add_argument("--out", metavar="PATH")
    po.add_argument("--fig", metavar="PATH",
                    help="render the sweep to an image file")

    pt = sub.add_parser("table", help="build the results table for k")
    pt.add_argument("--k", type=int, required=True)
    pt.add_argument("--sweep-limit", type=int, default=40)
    pt.add_argument("--workers", type=int, default=1)
    pt.add_argument("--search-output", metavar="PATH",
                    help="reuse a search records file instead of searching")
    pt.add_argument("--no-inline-search", action="store_true")
    pt.add_argument("--format", choices=("text", "records"), default="text")
    pt.add_argument("--out", metavar="PATH")
    pt.add_argument("--fig", metavar="PATH",
                    help="render the sweep and row values to an image file")
    return p


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _search_records(examples, families) -> str:
    by_ex: dict = {}
    for cf in families:
        by_ex.setdefault(cf.example, []).append(cf)
    lines = []
    for i, ex in enumerate(examples):
        rec = {
            "schema_version": report.RECORD_SCHEMA_VERSION,
            "type": "almost_example",
            "id": "k%d-ae%02d" % (ex.k, i),
            "k": ex.k,
            "ell": ex.ell,
            "classes": [list(c) for c in ex.classes],
            "families": [
                {
                    "free": list(cf.family.free),
                    "bound": {
                        str(v + 1): {
                            "const": str(expr.const),
                            "coeffs": {str(i2 + 1): str(c)
                                       for i2, c in expr.coeffs},
                        } for v, expr in cf.family.bound
                    },
                    "modulus": cf.modulus,
                    "witness_n": cf.witness_n,
                    "witness": list(cf.witness),
                } for cf in by_ex.get(ex, [])
            ],
        }
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def _search_text(examples, families) -> str:
    by_ex: dict = {}
    for cf in families:
        by_ex.setdefault(cf.example, []).append(cf)
    lines = ["%d almost-example(s)" % len(examples)]
    for i, ex in enumerate(examples):
        lines.append("[k%d-ae%02d] ell=%d classes=%s"
                     % (ex.k, i, ex.ell,
                        " ".join("{%s}" % ",".join(map(str, c))
                                 for c in ex.classes if len(c) > 1) or "all distinct"))
        for cf in by_ex.get(ex, []):
            lines.append("    family d=%d witness {%s} in Z_%d"
                         % (cf.modulus, ",".join(map(str, cf.witness)),
                            cf.witness_n))
    return "\n".join(lines) + "\n"


def cmd_search(args) -> int:
    if args.k < 1 or args.k > 16:
        print("error: --k out of supported range 1..16", file=sys.stderr)
        return EXIT_USAGE
    cfg = SearchConfig(
        k=args.k, ell_max=args.lmax,
        use_symmetry=not args.no_symmetry,
        use_anticlique=not args.no_anticlique,
        use_memo=not args.no_memo,
        workers=args.workers)
    try:
        examples = enumerate_relations(cfg, checkpoint_path=args.checkpoint,
                                       resume_path=args.resume)
        families = pipeline.certify_all(examples)
        if not pipeline.verify_families(families):
            print("error: witness verifier rejected a certified family",
                  file=sys.stderr)
            return EXIT_AUDIT
    except Interrupted as exc:
        print("interrupted; checkpoint at %s" % exc.path, file=sys.stderr)
        return EXIT_INTERRUPTED
    except InstantiationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_AUDIT
    if args.format == "records":
        _emit(_search_records(examples, families), args.out)
    else:
        _emit(_search_text(examples, families), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.n is None and args.n_range is None:
        print("error: one of --n / --n-range is required", file=sys.stderr)
        return EXIT_USAGE
    if args.n is not None:
        lo = hi = args.n
    else:
        try:
            lo_s, hi_s = args.n_range.split("..")
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            print("error: --n-range must look like 2..13", file=sys.stderr)
            return EXIT_USAGE
    if lo < 2 or hi < lo:
        print("error: bad n range", file=sys.stderr)
        return EXIT_USAGE
    try:
        results = {n: oracle.brute_force_f(n, args.k, workers=args.workers)
                   for n in range(lo, hi + 1)}
    except oracle.CapacityError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CAPACITY
    lines = []
    for n, (value, witness) in sorted(results.items()):
        if args.format == "records":
            rec = {"schema_version": report.RECORD_SCHEMA_VERSION,
                   "type": "oracle", "n": n, "k": args.k,
                   "value": None if math.isinf(value) else value,
                   "witness": list(witness.elements) if witness else None}
            lines.append(json.dumps(rec, sort_keys=True))
        else:
            if witness is None:
                lines.append("f_%d(%d) = infinity" % (n, args.k))
            else:
                lines.append("f_%d(%d) = %d  witness {%s}"
                             % (n, args.k, value,
                                ",".join(map(str, witness.elements))))
    _emit("\n".join(lines) + "\n", args.out)
    if args.fig:
        from . import figures
        figures.plot_sweep(args.k, {n: v for n, (v, _) in results.items()},
                           args.fig)
    return EXIT_OK


def load_search_records(path, k: int):
    """Parse a `search --format records` file back into certified
    families (witnesses are re-verified by the caller)."""
    families = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("type") != "almost_example":
                continue
            if rec["k"] != k:
                raise ValueError("records are for k=%d, requested k=%d"
                                 % (rec["k"], k))
            ex = AlmostExample(rec["k"],
                               tuple(tuple(c) for c in rec["classes"]))
            for frec in rec["families"]:
                bound = tuple(sorted(
                    (int(v) - 1,
                     AffineExpr(tuple(sorted(
                         (int(i) - 1, Fraction(c))
                         for i, c in e["coeffs"].items())),
                         Fraction(e["const"])))
                    for v, e in frec["bound"].items()))
                fam = SolutionFamily(ex.k, tuple(frec["free"]), bound)
                families.append(pipeline.CertifiedFamily(
                    ex, fam, ex.ell, frec["witness_n"],
                    tuple(frec["witness"])))
    return families


def _rows_from_pipeline(k: int, sweep_limit: int, workers: int):
    # the table search runs at the trivial bound itself so the baseline
    # all-distinct relation appears as an ordinary family row
    cfg = SearchConfig(k=k, ell_max=max(k, k * (k + 1) // 2),
                       workers=workers)
    examples = enumerate_relations(cfg)
    families = pipeline.certify_all(examples)
    if not pipeline.verify_families(families):
        raise InstantiationError("witness verifier rejected a family")
    return report.build_table(k, families, sweep_limit=sweep_limit,
                              workers=workers)


def cmd_table(args) -> int:
    if args.k < 1 or args.k > 16:
        print("error: --k out of supported range", file=sys.stderr)
        return EXIT_USAGE
    if args.search_output is None and args.no_inline_search:
        print("error: no --search-output and inline search disabled",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.search_output is not None:
            families = load_search_records(args.search_output, args.k)
            if not pipeline.verify_families(families):
                print("error: witness verifier rejected a loaded family",
                      file=sys.stderr)
                return EXIT_AUDIT
            rows = report.build_table(args.k, families,
                                      sweep_limit=args.sweep_limit,
                                      workers=args.workers)
        else:
            rows = _rows_from_pipeline(args.k, args.sweep_limit, args.workers)
    except (ValueError, KeyError, OSError) as exc:
        if isinstance(exc, oracle.CapacityError):
            print("error: %s" % exc, file=sys.stderr)
            return EXIT_CAPACITY
        if args.search_output is not None:
            print("error: cannot load %s: %s" % (args.search_output, exc),
                  file=sys.stderr)
            return EXIT_USAGE
        raise
    except InstantiationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_AUDIT
    if args.format == "records":
        _emit(report.format_records(rows), args.out)
    else:
        _emit(report.format_text(rows), args.out)
    if args.fig:
        from . import figures
        values = report._sweep_cache(args.k, args.sweep_limit)
        figures.plot_sweep(args.k, values, args.fig, rows=rows)
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "search":
        code = cmd_search(args)
    elif args.command == "oracle":
        code = cmd_oracle(args)
    else:
        code = cmd_table(args)
    return code


if __name__ == "__main__":
    sys.exit(main())
