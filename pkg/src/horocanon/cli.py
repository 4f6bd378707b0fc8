"""``horocanon`` command line: enumerate, solve, canonize, compare, census."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import census as census_mod
from .canonical import canonize
from .enumeration import DEFAULT_CEILING, EnumerationFilter, enumerate_pairings, write_directory
from .errors import (CeilingExceeded, DegenerateSolution, HorocanonError,
                     IterationCap, NotCusped, ParseError, Stuck, TriangulationError)
from .geometry import RESIDUAL_TOL
from .gluing import assemble_equations, solve, total_volume
from .triangulation import read_triangulation

EXIT_OK = 0
EXIT_DISTINCT = 1
EXIT_USAGE = 2
EXIT_FAILED = 3
EXIT_STUCK = 4
EXIT_CAP = 5


def _load(path):
    """Read a triangulation or report the problem and return None."""
    try:
        return read_triangulation(path)
    except ParseError as exc:
        print(f"{path}:{exc.lineno}: {exc}", file=sys.stderr)
    except TriangulationError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"{path}: {exc.strerror}", file=sys.stderr)
    return None


def cmd_enumerate(args):
    if args.n < 1:
        print("error: -n must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    target = "closed" if args.closed else "cusped"
    try:
        found = enumerate_pairings(args.n, EnumerationFilter(target, max_n=args.ceiling), workers=args.threads)
    except CeilingExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        write_directory(found, args.out)
    print(f"{len(found)} {target} triangulation(s) with {args.n} tetrahedra")
    return EXIT_OK


def _solve_report(T, tol):
    """``(status, shapes or None, residual or None)`` for the solve command."""
    try:
        sa = solve(assemble_equations(T), tol=tol)
    except NotCusped:
        return "NOT_CUSPED", None, None
    except DegenerateSolution as exc:
        best = exc.best
        return "DEGENERATE", best.z if best else None, best.residual_norm if best else None
    except HorocanonError as exc:
        best = getattr(exc, "best", None)
        return "UNDECIDED", best.z if best else None, best.residual_norm if best else None
    return "GEOMETRIC", sa.z, sa.residual_norm


def cmd_solve(args):
    T = _load(args.file)
    if T is None:
        return EXIT_USAGE
    status, shapes, res = _solve_report(T.oriented(), args.tol)
    print(f"status: {status}")
    if shapes is not None:
        for i, z in enumerate(shapes):
            print(f"z[{i}] = {z.real:+.16f} {z.imag:+.16f}i")
    if res is not None:
        print(f"residual: {res:.3e}")
    if status == "GEOMETRIC":
        print(f"volume: {total_volume(T, shapes):.16f}")
        return EXIT_OK
    return EXIT_FAILED


def cmd_canonize(args):
    T = _load(args.file)
    if T is None:
        return EXIT_USAGE
    T = T.oriented()
    status, shapes, _ = _solve_report(T, RESIDUAL_TOL)
    if status != "GEOMETRIC":
        print(f"status: {status}")
        return EXIT_FAILED
    try:
        D = canonize(T, shapes)
    except Stuck as exc:
        print(f"status: STUCK ({exc})")
        return EXIT_STUCK
    except IterationCap as exc:
        print(f"status: ITERATION_CAP ({exc})")
        return EXIT_CAP
    except HorocanonError as exc:
        print(f"status: UNDECIDED ({type(exc).__name__}: {exc})")
        return EXIT_FAILED
    for k, step in enumerate(D.flips, start=1):
        print(f"flip {k}: {step}")
    print(f"flips: {len(D.flips)}")
    for fv in D.verdicts:
        print(f"face {fv.face[0]}:{fv.face[1]} tilt_sum {fv.tilt_sum:+.12f} {fv.verdict}")
    print(f"cells: {len(D.cells)}")
    print(f"signature: {D.signature}")
    return EXIT_OK


def _canonical_or_none(path):
    T = _load(path)
    if T is None:
        return None
    try:
        return canonize(T).signature
    except HorocanonError as exc:
        print(f"{path}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return None


def cmd_compare(args):
    a = _canonical_or_none(args.file_a)
    b = _canonical_or_none(args.file_b)
    if a is None or b is None:
        print("UNDECIDED")
        return EXIT_FAILED
    if a == b:
        print("EQUAL")
        return EXIT_OK
    print("DISTINCT")
    return EXIT_DISTINCT


def cmd_census(args):
    if args.n < 1:
        print("error: -n must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.n > args.ceiling:
        print(f"error: n={args.n} is above the enumeration ceiling {args.ceiling}", file=sys.stderr)
        return EXIT_USAGE
    records = census_mod.run_census(args.n, threads=args.threads, ceiling=args.ceiling)
    if args.out:
        census_mod.write_db(records, args.n, args.out)
        geometric = sum(1 for r in records if r.status == census_mod.GEOMETRIC)
        print(f"{len(records)} candidate(s), {geometric} geometric, written to {args.out}")
    else:
        sys.stdout.write(census_mod.format_db(records, args.n))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="horocanon", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    threads = dict(type=int, default=os.cpu_count() or 1, help="worker processes (default: CPU count)")

    p = sub.add_parser("enumerate", help="list triangulations with n tetrahedra")
    p.add_argument("-n", type=int, required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--cusped", action="store_true", help="all vertex links tori (default)")
    kind.add_argument("--closed", action="store_true", help="all vertex links spheres")
    p.add_argument("-o", "--out", help="directory for one file per signature")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.add_argument("--threads", **threads)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("solve", help="solve the gluing equations of a triangulation file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("canonize", help="compute the canonical decomposition")
    p.add_argument("file")
    p.set_defaults(func=cmd_canonize)

    p = sub.add_parser("compare", help="decide whether two triangulations give the same manifold")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("census", help="census of cusped manifolds with at most n tetrahedra")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-o", "--out", help="database path (default: standard output)")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.add_argument("--threads", **threads)
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
