"""Command-line front end.

    symbreak analyze "A_"
    symbreak index --input graph.txt --format edgelist
    symbreak construct "E?~o" --output colouring.txt --trace trace.json
    symbreak verify --input corpora/graph8c.g6 --claim thm1 --jobs 4
    symbreak stats --input corpora/graph7c.g6 --report csv

Exit codes: 0 all claims hold, 1 violations found, 2 input or usage error,
3 a graph admits no 2-colouring breaking its small automorphisms.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .constructor import ConstructionInputError, TheoremFalsified, construct
from .graph import Graph, GraphFormatError, parse_edge_list, parse_graph6, to_graph6
from .harness import (
    CLAIMS,
    ResultCache,
    analyze_graph,
    filter_graphs,
    read_corpus,
    resolve_cache_dir,
    run_corpus,
    summarize,
)
from .solver import DEFAULT_MAX_K, distinguishing_index, small_distinguishing_index
from .symmetry import GroupTooLargeError, automorphism_group, small_automorphisms

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_FALSIFIED = 3


class InputError(Exception):
    pass


def _read_source(args) -> str:
    if args.graph is not None:
        return args.graph.replace("\\n", "\n")
    if args.input in (None, "-"):
        return sys.stdin.read()
    try:
        return Path(args.input).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc


def _read_graphs(args) -> list[Graph]:
    text = _read_source(args)
    if args.format == "edgelist":
        return [parse_edge_list(text)]
    graphs = [parse_graph6(line) for line in text.splitlines() if line.strip()]
    if not graphs:
        raise InputError("no graph given")
    return graphs


def _read_one(args) -> Graph:
    graphs = _read_graphs(args)
    if len(graphs) != 1:
        raise InputError(f"expected one graph, got {len(graphs)}")
    return graphs[0]


def _settings(args) -> dict:
    return {"max_colours": args.max_colours, "construct": bool(getattr(args, "construct", False)), "seed": args.seed_override}


def _index_json(res) -> dict:
    out = {"value": res.value, "method": res.method}
    if res.witness is not None:
        out["witness"] = [[u, v, c] for (u, v), c in zip(res.witness.edges, res.witness.colours)]
    return out


def cmd_analyze(args) -> int:
    for g in _read_graphs(args):
        rec, trace = analyze_graph(g, args.max_colours, args.construct, args.seed_override)
        out = rec.to_dict()
        if trace is not None:
            out["trace"] = trace.to_dict()
        print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def cmd_index(args) -> int:
    for g in _read_graphs(args):
        grp = automorphism_group(g)
        small = small_automorphisms(g, grp)
        out = {
            "graph6": to_graph6(g),
            "d_prime": _index_json(distinguishing_index(g, args.max_colours, grp=grp, seed=args.seed_override)),
            "d_small": _index_json(
                small_distinguishing_index(g, args.max_colours, grp=grp, small=small, seed=args.seed_override)
            ),
        }
        print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def cmd_construct(args) -> int:
    g = _read_one(args)
    try:
        colouring, trace = construct(g, seed=args.seed_override)
    except ConstructionInputError as exc:
        raise InputError(str(exc)) from exc
    except TheoremFalsified as exc:
        print(f"FATAL: {exc}", file=sys.stderr)
        print(json.dumps({"graph6": exc.graph6, "falsified": True}), file=sys.stderr)
        return EXIT_FALSIFIED
    _write(args.output, colouring.to_text())
    _write(args.trace, trace.to_json() + "\n", default=sys.stderr)
    return EXIT_OK if trace.verified else EXIT_FALSIFIED


def _write(path, text: str, default=None) -> None:
    if path in (None, "-"):
        (default or sys.stdout).write(text)
    else:
        Path(path).write_text(text)


def _run(args, claims):
    text = _read_source(args)
    try:
        graphs = read_corpus(text.splitlines())
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    graphs = filter_graphs(graphs, args.min_order, args.max_order, args.connected_only, args.regular_only)
    cache_dir = resolve_cache_dir(args.cache_dir)
    cache = ResultCache(cache_dir, _settings(args)) if cache_dir else None
    records, traces = run_corpus(
        graphs, args.max_colours, args.jobs, args.construct, args.seed_override, cache
    )
    if args.records:
        with open(args.records, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")
    summary = summarize([g for _, g in graphs], records, claims, traces if args.construct else None)
    report = {"json": summary.to_json, "text": summary.to_text, "csv": summary.to_csv}[args.report]()
    _write(args.output, report)
    return summary


def cmd_verify(args) -> int:
    claims = list(dict.fromkeys(args.claim))
    summary = _run(args, claims)
    return EXIT_OK if summary.ok else EXIT_VIOLATIONS


def cmd_stats(args) -> int:
    summary = _run(args, [])
    return EXIT_OK if summary.ok else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symbreak", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=False):
        if not corpus:
            p.add_argument("graph", nargs="?", help="graph6 string (or edge-list text with --format edgelist)")
        p.add_argument("--input", help="file to read ('-' for stdin)")
        p.add_argument("--format", choices=("graph6", "edgelist"), default="graph6")
        p.add_argument("--max-colours", type=int, default=DEFAULT_MAX_K)
        p.add_argument("--seed-override", type=int, default=None)

    p = sub.add_parser("analyze", help="full record for each input graph")
    common(p)
    p.add_argument("--construct", action="store_true", help="include the construction trace")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("index", help="distinguishing and small distinguishing index with witnesses")
    common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("construct", help="2-colouring breaking all small automorphisms")
    common(p)
    p.add_argument("--output", help="colouring file (default stdout)")
    p.add_argument("--trace", help="trace JSON file (default stderr)")
    p.set_defaults(func=cmd_construct)

    for name, func in (("verify", cmd_verify), ("stats", cmd_stats)):
        p = sub.add_parser(name, help="check claims over a graph6 corpus" if name == "verify" else "index distributions")
        common(p, corpus=True)
        p.set_defaults(graph=None, func=func)
        if name == "verify":
            p.add_argument("--claim", action="append", choices=CLAIMS, required=True)
        p.add_argument("--min-order", type=int)
        p.add_argument("--max-order", type=int)
        p.add_argument("--connected-only", action="store_true")
        p.add_argument("--regular-only", action="store_true")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--cache-dir", help="result cache directory (default $SYMBREAK_CACHE)")
        p.add_argument("--report", choices=("json", "text", "csv"), default="text")
        p.add_argument("--construct", action="store_true", help="also run the construction on eligible graphs")
        p.add_argument("--records", help="write every record as NDJSON to this file")
        p.add_argument("--output", help="report file (default stdout)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.format == "edgelist" and args.command in ("verify", "stats"):
        parser.error("corpus commands read graph6 only")
    if args.max_colours < 1 or getattr(args, "jobs", 1) < 1:
        parser.error("--max-colours and --jobs must be positive")
    try:
        return args.func(args)
    except (InputError, GraphFormatError, GroupTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
