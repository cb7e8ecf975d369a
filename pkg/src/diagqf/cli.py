"""Command-line surface.

Subcommands: sieve, union, moments, prop13, bernays, density, diagnostics,
forms, lvalue.  Reports go to stdout (or --out) as CSV or JSON; --plot
additionally renders a figure to the given file.  Exit codes: 0 success,
2 usage or domain error, 3 violated internal invariant.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager

from .arith import ShapeZ, primes_1mod4
from . import cache as qcache
from .classgroup import reduced_forms
from .errors import InvariantViolation
from .experiments import (
    ExperimentConfig,
    bernays_scan,
    char_sum_diagnostics,
    density_run,
    correlation_ladder,
)
from .lseries import ProductCharacter, l_value
from .sieve import DEFAULT_SEGMENT_WIDTH, moment_report, rep_counts

CACHE_ENV = "DIAGQF_CACHE_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _int_list(text: str) -> list[int]:
    return [int(float(t)) for t in text.split(",") if t.strip()]


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="diagqf", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, plot=False):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--cache-dir", default=None, help=f"sieve cache dir (or ${CACHE_ENV})")
        p.add_argument("--shards", type=int, default=1)
        p.add_argument("--segment-width", type=int, default=DEFAULT_SEGMENT_WIDTH)
        if plot:
            p.add_argument("--plot", default=None, metavar="PNG", help="also render a figure")

    p = sub.add_parser("sieve", help="representation count table r(n, z)")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    common(p)

    p = sub.add_parser("union", help="count of n <= X represented by any listed shape")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--z-list", type=_int_list, required=True, help="comma separated shapes")
    common(p)

    p = sub.add_parser("moments", help="weighted first/second moments over primes <= Z")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--zmax", type=float, required=True)
    p.add_argument("--kind", choices=("P", "Q"), default="P")
    p.add_argument("--stride", type=int, default=1)
    common(p)

    p = sub.add_parser("prop13", help="correlation sum against its main term")
    p.add_argument("--z1", type=int, required=True)
    p.add_argument("--z2", type=int, required=True)
    p.add_argument("--x", type=_int_list, required=True, help="X or comma separated ladder")
    p.add_argument("--eps", type=float, default=1e-8)
    common(p, plot=True)

    p = sub.add_parser("bernays", help="represented-integer density scan for one shape")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--x", type=_int_list, required=True, help="X or comma separated ladder")
    common(p, plot=True)

    p = sub.add_parser("density", help="union density over prime shapes with CS bound")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--policy", choices=("paper", "explicit"), default="paper")
    p.add_argument("--zmax", type=float, default=None, help="Z for the explicit policy")
    p.add_argument("--kind", choices=("P", "Q"), default="P")
    p.add_argument("--stride", type=int, default=1)
    common(p, plot=True)

    p = sub.add_parser("diagnostics", help="character sum diagnostics")
    p.add_argument("--zmax", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--orth-limit", type=int, default=500)
    common(p, plot=True)

    p = sub.add_parser("forms", help="reduced forms of a negative discriminant")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--d", type=int, help="negative discriminant")
    g.add_argument("--z", type=int, help="shape z, uses discriminant -4z")
    common(p)

    p = sub.add_parser("lvalue", help="L(s, chi) for a product of Kronecker characters")
    p.add_argument(
        "--factors", type=_int_list, required=True,
        help="comma separated discriminants; use --factors=-4,5 for negatives",
    )
    p.add_argument("--s", type=int, choices=(1, 2), required=True)
    p.add_argument("--eps", type=float, default=1e-8)
    common(p)

    return top


@contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _emit_rows(fmt, header, rows, stream):
    """rows: list of dicts sharing the header keys, full float precision."""
    if fmt == "json":
        json.dump(rows, stream, indent=2)
        stream.write("\n")
    else:
        stream.write(",".join(header) + "\n")
        for row in rows:
            stream.write(",".join("" if row[k] is None else repr(row[k]) if isinstance(row[k], float) else str(row[k]) for k in header) + "\n")


def _emit_obj(fmt, header, obj, stream):
    if fmt == "json":
        json.dump(obj, stream, indent=2)
        stream.write("\n")
    else:
        _emit_rows("csv", header, [obj], stream)


def _run(args) -> int:
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV) or None
    kw = dict(shards=args.shards, segment_width=args.segment_width)

    if args.command == "sieve":
        cfg = ExperimentConfig(xs=(args.x,), fmt=args.format, cache_dir=cache_dir, shards=args.shards)
        ShapeZ(args.z)
        if cache_dir:
            path = qcache.cache_path(cache_dir, args.x, args.z)
            if path.exists():
                table = qcache.read_table(path)
            else:
                table = rep_counts(args.x, args.z, **kw)
                os.makedirs(cache_dir, exist_ok=True)
                qcache.write_table(table, path)
        else:
            table = rep_counts(args.x, args.z, **kw)
        with _open_out(args.out) as fh:
            if args.format == "json":
                json.dump(
                    {"X": table.X, "z": table.z.z, "r": [int(v) for v in table.counts[1:]]},
                    fh,
                )
                fh.write("\n")
            else:
                qcache.write_csv(table, fh)
        return EXIT_OK

    if args.command == "union":
        ExperimentConfig(xs=(args.x,), fmt=args.format, shards=args.shards)
        from .sieve import union_count

        zs = [ShapeZ(z).z for z in args.z_list]
        n = union_count(args.x, zs, **kw)
        with _open_out(args.out) as fh:
            _emit_obj(args.format, ["X", "z_list", "N"], {"X": args.x, "z_list": ";".join(map(str, zs)), "N": n}, fh)
        return EXIT_OK

    if args.command == "moments":
        ExperimentConfig(xs=(args.x,), fmt=args.format, shards=args.shards, z_cap=args.zmax)
        primes = primes_1mod4(args.zmax, kind=args.kind, stride=args.stride)
        rep = moment_report(args.x, primes, **kw)
        obj = {
            "X": rep.X,
            "Z": rep.Z,
            "count_S": len(rep.primes),
            "first_moment": rep.first_moment,
            "diagonal": rep.diagonal,
            "off_diagonal": rep.off_diagonal,
            "cs_lower_bound": rep.cs_lower_bound,
            "regime_ok": rep.regime_ok,
        }
        with _open_out(args.out) as fh:
            _emit_obj(args.format, list(obj), obj, fh)
        return EXIT_OK

    if args.command == "prop13":
        ExperimentConfig(xs=tuple(args.x), fmt=args.format, cache_dir=cache_dir, shards=args.shards)
        reports = correlation_ladder(args.z1, args.z2, args.x, eps=args.eps, cache_dir=cache_dir, **kw)
        rows = [r.to_dict() for r in reports]
        with _open_out(args.out) as fh:
            _emit_rows(args.format, ["z1", "z2", "X", "lhs", "main_term", "abs_err", "rel_err"], rows, fh)
        if args.plot:
            from .plotting import plot_correlation

            plot_correlation(reports, args.plot)
        return EXIT_OK

    if args.command == "bernays":
        ExperimentConfig(xs=tuple(args.x), fmt=args.format, cache_dir=cache_dir, shards=args.shards)
        points = bernays_scan(args.z, args.x, cache_dir=cache_dir, **kw)
        rows = [p.to_dict() for p in points]
        with _open_out(args.out) as fh:
            _emit_rows(args.format, ["X", "count", "kappa_hat"], rows, fh)
        if args.plot:
            from .plotting import plot_bernays

            plot_bernays(points, args.z, args.plot)
        return EXIT_OK

    if args.command == "density":
        ExperimentConfig(
            xs=(args.x,), fmt=args.format, cache_dir=cache_dir, shards=args.shards,
            z_cap=args.zmax if args.policy == "explicit" else None,
        )
        report = density_run(
            args.x, policy=args.policy, Z=args.zmax, kind=args.kind, stride=args.stride,
            cache_dir=cache_dir, **kw,
        )
        obj = report.to_dict()
        row = {k: obj[k] for k in ("X", "Z", "count_S", "N", "ratio", "cs_bound")}
        with _open_out(args.out) as fh:
            if args.format == "json":
                _emit_obj("json", [], obj, fh)
            else:
                _emit_rows("csv", list(row), [row], fh)
        if args.plot:
            from .plotting import plot_density

            plot_density(report, args.plot)
        return EXIT_OK

    if args.command == "diagnostics":
        report = char_sum_diagnostics(args.zmax, args.n_max, orth_limit=args.orth_limit)
        rows = [r.to_dict() for r in report.rows]
        with _open_out(args.out) as fh:
            if args.format == "json":
                obj = {
                    "Z": report.Z,
                    "n_max": report.n_max,
                    "starred_sum": report.starred_sum,
                    "hb_ratio": report.hb_ratio,
                    "elliott_lhs": report.elliott_lhs,
                    "elliott_ratio": report.elliott_ratio,
                    "all_orthogonality_zero": report.all_orthogonality_zero,
                    "two_way_ok": report.two_way_ok,
                    "reciprocity_ok": report.reciprocity_ok,
                    "rows": rows,
                }
                _emit_obj("json", [], obj, fh)
            else:
                _emit_rows("csv", ["n", "T", "orth_sum"], rows, fh)
        if args.plot:
            from .plotting import plot_diagnostics

            plot_diagnostics(report, args.plot)
        return EXIT_OK

    if args.command == "forms":
        D = args.d if args.d is not None else ShapeZ(args.z).z_star
        forms = reduced_forms(D)
        rows = [{"a": f.a, "b": f.b, "c": f.c} for f in forms]
        with _open_out(args.out) as fh:
            _emit_rows(args.format, ["a", "b", "c"], rows, fh)
        return EXIT_OK

    if args.command == "lvalue":
        chi = ProductCharacter(tuple(args.factors))
        lv = l_value(chi, args.s, args.eps)
        obj = {"factors": list(chi.factors), "modulus": chi.modulus, "s": args.s, **lv.to_dict()}
        with _open_out(args.out) as fh:
            if args.format == "json":
                _emit_obj("json", [], obj, fh)
            else:
                row = {k: obj[k] for k in ("modulus", "s", "value", "tail_bound", "terms_used", "method")}
                _emit_rows("csv", list(row), [row], fh)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def cli_dispatch(argv) -> int:
    """Parse argv (without the program name) and run; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _run(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
