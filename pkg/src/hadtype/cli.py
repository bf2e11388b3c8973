"""Command-line front end.

Exit codes: 0 success, 1 check failure (non-Hadamard input to ``verify`` or
a failed catalog check), 2 usage or parse errors.  The environment variable
HADTYPE_THREADS sets the default worker/shard count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import profile, quad_p, quad_type, triple_spectrum
from .canonical import canonicalize_quad
from .catalog import group_by_profile, ingest, read_jsonl, run_checks
from .matrix import BitMatrix, ParseError, emit_matrix, is_hadamard, parse_matrix
from .recognition import Verdict, reduce_to_sylvester
from .search import SearchConfig, search

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HADTYPE_THREADS", "1")))
    except ValueError:
        return 1


def _read_matrix(path: str, format: str) -> BitMatrix:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_matrix(text, format)


def _emit(m: BitMatrix, format: str) -> str:
    if format == "json":
        lines = emit_matrix(m, "signs").splitlines()
        return json.dumps({"order": m.order, "signs": lines}) + "\n"
    return emit_matrix(m, format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hadtype",
        description="Type and profile invariants of Hadamard matrices.",
    )
    parser.add_argument("--version", action="version", version=f"hadtype {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_matrix_arg(p):
        p.add_argument("file", help="matrix file, or - for stdin")
        p.add_argument(
            "--format", choices=("signs", "zeroone"), default="signs",
            help="input text format",
        )

    p = sub.add_parser("verify", help="check the Hadamard property")
    add_matrix_arg(p)

    p = sub.add_parser("type", help="type of a row quadruple")
    add_matrix_arg(p)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)

    p = sub.add_parser("spectrum", help="completion-type spectrum of a row triple")
    add_matrix_arg(p)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("profile", help="profile of all row triples, as canonical JSON")
    add_matrix_arg(p)
    p.add_argument("--workers", type=int, default=None, help="parallel workers")
    p.add_argument("--fingerprint", action="store_true", help="also print the sha256")

    p = sub.add_parser("canon", help="canonical block form of a row quadruple")
    add_matrix_arg(p)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)

    p = sub.add_parser("sylvester-reduce", help="recognize the doubling matrix")
    add_matrix_arg(p)

    p = sub.add_parser("search", help="search for matrices with restricted types")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--types", required=True, help="comma-separated allowed types, e.g. 1,2")
    p.add_argument("--mode", choices=("exhaustive", "randomized"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-solutions", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=1_000_000_000)
    p.add_argument("--shards", type=int, default=None, help="parallel shards")
    p.add_argument("--out", default=None, help="directory for solution files")
    p.add_argument(
        "--format", choices=("signs", "zeroone", "json"), default="signs",
        help="solution file format",
    )

    p = sub.add_parser("catalog", help="ingest, group, and check matrix collections")
    csub = p.add_subparsers(dest="catalog_command", required=True)

    ci = csub.add_parser("ingest", help="parse files and write JSONL entries")
    ci.add_argument("paths", nargs="+")
    ci.add_argument("--format", choices=("signs", "zeroone"), default="signs")
    ci.add_argument("--out", default=None, help="JSONL output path (default stdout)")

    cg = csub.add_parser("group", help="group a JSONL catalog by profile fingerprint")
    cg.add_argument("jsonl")

    cc = csub.add_parser("check", help="run the invariant check suite on files")
    cc.add_argument("paths", nargs="+")
    cc.add_argument("--format", choices=("signs", "zeroone"), default="signs")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ParseError, OSError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    cmd = args.command

    if cmd == "verify":
        m = _read_matrix(args.file, args.format)
        if is_hadamard(m):
            print(f"hadamard order={m.order}")
            return EXIT_OK
        print(f"not hadamard order={m.order}")
        return EXIT_CHECK_FAILED

    if cmd == "type":
        m = _read_matrix(args.file, args.format)
        t = quad_type(m, args.i, args.j, args.k, args.l)
        p = quad_p(m, args.i, args.j, args.k, args.l)
        print(json.dumps({"type": t, "p": p}))
        return EXIT_OK

    if cmd == "spectrum":
        m = _read_matrix(args.file, args.format)
        spec = triple_spectrum(m, args.i, args.j, args.k)
        print(json.dumps({"spectrum": [[t, c] for t, c in spec.counts]}))
        return EXIT_OK

    if cmd == "profile":
        m = _read_matrix(args.file, args.format)
        workers = args.workers if args.workers is not None else _default_threads()
        prof = profile(m, workers=workers)
        print(prof.canonical_json())
        if args.fingerprint:
            print(prof.fingerprint())
        return EXIT_OK

    if cmd == "canon":
        m = _read_matrix(args.file, args.format)
        form = canonicalize_quad(m, args.i, args.j, args.k, args.l)
        print(json.dumps({"s": form.s, "t": form.t, "blocks": list(form.block_sizes)}))
        return EXIT_OK

    if cmd == "sylvester-reduce":
        m = _read_matrix(args.file, args.format)
        result = reduce_to_sylvester(m)
        print(result.verdict.value)
        if result.verdict is Verdict.SYLVESTER:
            print(json.dumps(result.transcript.to_json()))
        return EXIT_OK

    if cmd == "search":
        return _run_search(args)

    if cmd == "catalog":
        return _run_catalog(args)

    raise AssertionError(f"unhandled command {cmd}")


def _run_search(args) -> int:
    try:
        types = frozenset(int(t) for t in args.types.split(",") if t != "")
    except ValueError:
        print(f"error: cannot parse --types {args.types!r}", file=sys.stderr)
        return EXIT_USAGE
    shards = args.shards if args.shards is not None else _default_threads()
    config = SearchConfig(
        order=args.order,
        allowed_types=types,
        mode=args.mode,
        seed=args.seed,
        max_solutions=args.max_solutions,
        node_budget=args.node_budget,
        thread_shards=shards,
    )
    started = time.perf_counter()
    outcome = search(config)
    elapsed = time.perf_counter() - started
    if args.out is not None:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        ext = "json" if args.format == "json" else args.format
        for idx, m in enumerate(outcome.solutions):
            (outdir / f"solution_{idx:04d}.{ext}").write_text(_emit(m, args.format))
    summary = {
        "order": args.order,
        "types": sorted(types),
        "solutions": len(outcome.solutions),
        "nodes": outcome.nodes_explored,
        "exhausted": outcome.exhausted,
        "wall_time_s": round(elapsed, 3),
    }
    print(json.dumps(summary))
    return EXIT_OK


def _run_catalog(args) -> int:
    sub = args.catalog_command
    if sub == "ingest":
        result = ingest(args.paths, format=args.format, jsonl_path=args.out)
        for source, message in result.issues:
            print(f"{source}: {message}", file=sys.stderr)
        if args.out is None:
            for e in result.entries:
                print(json.dumps(e.to_record(), separators=(",", ":")))
        return EXIT_OK

    if sub == "group":
        records = read_jsonl(args.jsonl)
        print(json.dumps(group_by_profile(records), indent=2))
        return EXIT_OK

    if sub == "check":
        result = ingest(args.paths, format=args.format)
        for source, message in result.issues:
            print(f"{source}: {message}", file=sys.stderr)
        report = run_checks(result.entries)
        print(json.dumps(report, indent=2))
        if not report["passed"] or result.issues:
            return EXIT_CHECK_FAILED
        return EXIT_OK

    raise AssertionError(f"unhandled catalog command {sub}")


if __name__ == "__main__":
    sys.exit(main())
