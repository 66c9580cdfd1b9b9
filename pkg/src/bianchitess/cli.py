"""Command line entry point ``tess``.

    tess run --d -14
    tess run --range -1..-100 --class-number 1,2 --jobs 4
    tess run --paper-range
    tess report --format md
    tess export --geometry out/
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import TessError
from .pipeline import (
    PAPER_RANGE,
    default_cache_dir,
    export_geometry,
    load_all_reports,
    render_table,
    run_range,
)
from .qfield import class_number, is_squarefree, make_context

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2


def parse_range(text: str) -> list[int]:
    """``-1..-100`` -> [-1, ..., -100] restricted to square-free values."""
    try:
        a, b = (int(x) for x in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, expected e.g. -1..-100")
    lo, hi = sorted((a, b))
    return [d for d in range(hi, lo - 1, -1) if d < 0 and is_squarefree(d)]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tess", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--cache", type=Path, default=None,
                   help="cache directory (default: $BIANCHITESS_CACHE or ./tess-cache)")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute tessellations")
    sel = run.add_mutually_exclusive_group(required=True)
    sel.add_argument("--d", type=int, action="append", dest="ds", help="a negative square-free d")
    sel.add_argument("--range", type=parse_range, dest="range_")
    sel.add_argument("--paper-range", action="store_true")
    run.add_argument("--class-number", type=_int_list, default=None,
                     help="keep only fields with these class numbers")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--force", action="store_true", help="ignore cached results")

    rep = sub.add_parser("report", help="render the class-count table from the cache")
    rep.add_argument("--format", choices=["json", "csv", "md", "markdown"], default="md")
    rep.add_argument("--d", type=int, action="append", dest="ds")

    exp = sub.add_parser("export", help="write per-class geometry files from the cache")
    exp.add_argument("--geometry", type=Path, required=True)
    exp.add_argument("--d", type=int, action="append", dest="ds")
    exp.add_argument("--no-off", action="store_true", help="skip OFF meshes")
    return p


def _selected(args) -> list[int]:
    if args.ds:
        ds = list(args.ds)
    elif args.range_ is not None:
        ds = args.range_
    else:
        ds = list(PAPER_RANGE)
    if args.class_number:
        keep = set(args.class_number)
        out = []
        for d in ds:
            try:
                if class_number(make_context(d)) in keep:
                    out.append(d)
            except TessError:
                out.append(d)  # let the run record the failure
        ds = out
    return ds


def _glue_ranges(argv: list[str]) -> list[str]:
    # "--range -1..-100" would otherwise be read as two options
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--range" and i + 1 < len(argv):
            out.append(f"--range={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    cache = args.cache if args.cache is not None else default_cache_dir()

    if args.command == "run":
        if args.jobs < 1:
            print("--jobs must be positive", file=sys.stderr)
            return EXIT_USAGE
        manifest = run_range(_selected(args), jobs=args.jobs, cache_dir=cache, force=args.force)
        for d in manifest.requested:
            state = manifest.final(d)
            note = " (cached)" if manifest.from_cache.get(d) else ""
            err = f"  {manifest.errors[d]}" if d in manifest.errors else ""
            print(f"d={d}: {state}{note}{err}")
        return EXIT_PARTIAL if manifest.failed else EXIT_OK

    reports = load_all_reports(cache)
    if args.ds:
        wanted = set(args.ds)
        reports = [r for r in reports if r.d in wanted]

    if args.command == "report":
        sys.stdout.write(render_table(reports, args.format))
        return EXIT_OK

    if args.command == "export":
        for r in reports:
            for path in export_geometry(r, args.geometry, off=not args.no_off):
                print(path)
        return EXIT_OK
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
