"""Command line entry point: ``acmcurve verify | scan-bounds | hilbert | groebner``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from .bounds import candidate_scan, format_scan
from .errors import AcmCurveError, ParseError
from .groebner import buchberger, format_ideal, read_ideal
from .hilbert import hilbert_polynomial, hilbert_series
from .pipeline import PipelineConfig, run_verification, write_report


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="acmcurve", description="ACM curve construction and verification toolkit")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="log stage progress (-vv for debug)")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="build the degree-19 genus-12 curve and check every claim")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--prime", type=int, default=None, help="field characteristic (default 31991 or $ACMCURVE_PRIME)")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", default=None, help="write the report here instead of stdout")
    v.add_argument("--no-normalize", action="store_true", help="do not fix the triple points at the coordinate points")
    v.add_argument("--budget", type=int, default=20, help="resampling attempts per genericity stage")
    v.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("scan-bounds", help="candidate (g, d) windows for r in a range")
    s.add_argument("range", nargs="*", type=int, metavar="R", help="r_min r_max (alternative to the flags)")
    s.add_argument("--r-min", type=int, default=None)
    s.add_argument("--r-max", type=int, default=None)
    s.add_argument("--format", choices=("text", "json"), default="text")

    h = sub.add_parser("hilbert", help="Hilbert series, degree and genus of an ideal file")
    h.add_argument("file")
    h.add_argument("--format", choices=("text", "json"), default="text")

    g = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    g.add_argument("file")
    g.add_argument("--out", default=None)
    return ap


def _cmd_verify(args) -> int:
    cfg = PipelineConfig(
        seed=args.seed, p=args.prime, normalize=not args.no_normalize, budget=args.budget,
        format=args.format, out=args.out, threads=args.threads,
    )
    rep = run_verification(cfg)
    data = write_report(rep, cfg.format, cfg.out)
    if cfg.out:
        print(f"{rep.verdict}: report written to {cfg.out}")
    else:
        sys.stdout.write(data.decode())
    return 0 if rep.passed else 1


def _cmd_scan(args, ap: argparse.ArgumentParser) -> int:
    lo, hi = args.r_min, args.r_max
    if args.range:
        if len(args.range) != 2 or lo is not None or hi is not None:
            ap.error("scan-bounds takes either R_MIN R_MAX or --r-min/--r-max")
        lo, hi = args.range
    lo = 3 if lo is None else lo
    hi = lo if hi is None else hi
    t0 = time.perf_counter()
    rows = candidate_scan(lo, hi)
    if args.format == "json":
        print(json.dumps([w.as_dict() for w in rows], indent=2))
    else:
        sys.stdout.write(format_scan(rows))
        print(f"scanned r={lo}..{hi} in {time.perf_counter() - t0:.4f}s")
    return 0


def _cmd_hilbert(args) -> int:
    ideal = read_ideal(args.file)
    hs = hilbert_series(ideal)
    info = hilbert_polynomial(hs)
    if args.format == "json":
        print(json.dumps({"series": str(hs), **hs.as_dict(), **info.as_dict()}, indent=2))
        return 0
    print(f"Hilbert series: {hs}")
    print(f"dimension {info.dimension}")
    if info.dimension == 1:
        print(f"degree {info.degree}, genus {info.genus}")
    else:
        print(f"degree {info.degree}")
    return 0


def _cmd_groebner(args) -> int:
    ideal = read_ideal(args.file)
    text = format_ideal(buchberger(ideal))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "scan-bounds":
            return _cmd_scan(args, ap)
        if args.command == "hilbert":
            return _cmd_hilbert(args)
        return _cmd_groebner(args)
    except ParseError as exc:
        print(f"acmcurve: parse error: {exc}", file=sys.stderr)
        return 2
    except (AcmCurveError, ValueError, OSError) as exc:
        print(f"acmcurve: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
