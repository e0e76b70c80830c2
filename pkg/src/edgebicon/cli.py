"""Command-line entry point: ``edgebicon run | check | gadget``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .check import check_corpus, check_gadget, dump_report
from .corpus import atlas_catalog, random_corpus
from .exceptions import BiconError, CycleCapExceeded
from .graph import (Graph, diameter, format_edge_list, generate, parse_generator_spec,
                    read_edge_list, to_dot)
from .local import classification_correct_round, doubling_run, run_local
from .oracles import (DEFAULT_CYCLE_NODE_CAP, EdgeClassification, bridges_oracle,
                      components_oracle, cycle_witness_radius)
from .protocol import run_biconnectivity
from .validation import check_initiator

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="FILE", help="edge-list file (0-based ids, '#' comments)")
    src.add_argument("--gen", metavar="KIND:PARAMS",
                     help="generator, e.g. cycle:4, barbell:3, random_connected:20,0.2")
    p.add_argument("--seed", type=int, default=0, help="generator seed")


def load_graph(args) -> Graph:
    if args.input:
        return read_edge_list(args.input)
    kind, params = parse_generator_spec(args.gen)
    return generate(kind, *params, seed=args.seed)


def cycle_cap() -> int:
    raw = os.environ.get("BICON_CYCLE_CAP")
    return int(raw) if raw else DEFAULT_CYCLE_NODE_CAP


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _upsilon(g: Graph):
    try:
        return cycle_witness_radius(g, max_nodes=cycle_cap())
    except CycleCapExceeded:
        return None


# --- run ----------------------------------------------------------------------------------

def cmd_run(args) -> int:
    if args.max_rounds is not None and args.max_rounds < 1:
        raise UsageError("--max-rounds must be >= 1")
    g = load_graph(args)
    d = diameter(g)
    if args.mode == "congest":
        init = 0 if args.initiator is None else args.initiator
        if init == "all":
            raise UsageError("congest mode needs a single --initiator node")
        init = check_initiator(int(init), g)
        res, sim = run_biconnectivity(g, init, max_rounds=args.max_rounds or 10_000,
                                      trace=bool(args.trace))
        if args.out:
            _write(args.out, res.dumps())
        if args.trace:
            _write(args.trace, sim.trace_jsonl())
        if args.dot:
            _write(args.dot, to_dot(g, res.classification))
        met = res.metrics
        print(f"n={g.n} m={g.m} diam={d} height={res.height}")
        print(f"rounds={met.rounds} messages={met.total_messages} max_bits={met.max_message_bits}")
        print(f"rounds/diam={met.rounds / max(d, 1):.3f} messages/m={met.total_messages / max(g.m, 1):.3f}")
        print(f"bridges={len(res.classification.bridges)} "
              f"components={len(set(res.classification.component_label))}")
        return EXIT_OK

    if args.initiator not in (None, "all"):
        raise UsageError(f"{args.mode} mode starts every node; use --initiator all")
    truth = bridges_oracle(g)
    ups = _upsilon(g)
    if args.mode == "local":
        rounds = args.max_rounds or d + 1
        run, sim = run_local(g, rounds, trace=bool(args.trace))
        correct = classification_correct_round(run, truth)
        payload = run.to_json()
        payload["bridges"] = [list(e) for e in sorted(run.endpoint_bridges())]
        payload["correct_round"] = correct
        payload["cycle_witness_radius"] = ups
        if args.out:
            _write(args.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
        if args.trace:
            _write(args.trace, sim.trace_jsonl())
        print(f"n={g.n} m={g.m} diam={d} upsilon={ups}")
        print(f"rounds={rounds} messages={sim.metrics.total_messages} "
              f"max_bits={sim.metrics.max_message_bits} correct_round={correct}")
    else:
        horizon = args.max_rounds or 8 * (d + 1)
        rep = doubling_run(g, horizon, truth)
        payload = rep.to_json()
        payload["cycle_witness_radius"] = ups
        if args.out:
            _write(args.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
        print(f"n={g.n} m={g.m} diam={d} upsilon={ups}")
        print(f"first_correct_phase={rep.first_correct_phase} "
              f"rounds_to_correct={rep.rounds_to_correct} stable={rep.stable}")
    if args.dot:
        _write(args.dot, to_dot(g, EdgeClassification(truth, g.edges - truth,
                                                      components_oracle(g, truth))))
    return EXIT_OK


# --- check ----------------------------------------------------------------------------------

def cmd_check(args) -> int:
    entries: list[tuple[str, Graph]] = []
    if args.exhaustive:
        if args.exhaustive > 7:
            raise UsageError("--exhaustive covers at most 7 nodes")
        entries += [(f"atlas:{i}", g) for i, g in enumerate(atlas_catalog(args.exhaustive))]
    if args.random:
        entries += [(f"random:seed={s}", g)
                    for s, g in random_corpus(args.random, args.max_n, args.first_seed)]
    if not entries:
        raise UsageError("empty corpus: give --exhaustive and/or --random")
    report = check_corpus(entries, skip_cross_edges=args.fault == "skip-cross-edges",
                          workers=args.workers, round_factor=args.round_factor,
                          message_factor=args.message_factor)
    text = dump_report(report)
    if args.out:
        _write(args.out, text)
    print(f"graphs={report['graphs']} mismatches={report['mismatch_count']} "
          f"max_rounds/diam={report['max_rounds_per_diam']:.3f} "
          f"max_messages/m={report['max_messages_per_edge']:.3f} "
          f"max_bits={report['max_message_bits']}")
    for mm in report["mismatches"][:5]:
        print(f"MISMATCH {mm['source']}: {'; '.join(mm['failures'])}", file=sys.stderr)
        print(mm["edge_list"], end="", file=sys.stderr)
    return EXIT_OK if report["mismatch_count"] == 0 else EXIT_FAIL


# --- gadget ----------------------------------------------------------------------------------

def cmd_gadget(args) -> int:
    g = load_graph(args)
    try:
        u, v = (int(x) for x in args.edge.split(","))
    except ValueError:
        raise UsageError(f"--edge expects U,V, got {args.edge!r}") from None
    if not g.has_edge(u, v):
        raise UsageError(f"edge ({u}, {v}) is not in the graph")
    failures = check_gadget(g, (u, v))
    for f in failures:
        print(f"FAIL {f}")
    if failures:
        print(format_edge_list(g), end="", file=sys.stderr)
        return EXIT_FAIL
    print("pass: every edge of G carried a message; all 10 gadget edges classified correctly")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgebicon",
                                     description="Simulated distributed edge-biconnectivity.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a protocol on one graph")
    _add_input(run)
    run.add_argument("--initiator", default=None,
                     type=lambda s: s if s == "all" else int(s), help="node id or 'all'")
    run.add_argument("--mode", choices=("congest", "local", "doubling"), default="congest")
    run.add_argument("--max-rounds", type=int, default=None)
    run.add_argument("--out", metavar="FILE", help="result JSON")
    run.add_argument("--trace", metavar="FILE", help="per-message JSONL trace")
    run.add_argument("--dot", metavar="FILE", help="Graphviz rendering of the result")
    run.set_defaults(func=cmd_run)

    chk = sub.add_parser("check", help="cross-check the protocol against the oracles")
    chk.add_argument("--exhaustive", type=int, default=0, metavar="N",
                     help="all connected graphs on up to N <= 7 nodes")
    chk.add_argument("--random", type=int, default=0, metavar="COUNT", help="random graphs")
    chk.add_argument("--max-n", type=_positive_int, default=60)
    chk.add_argument("--first-seed", type=int, default=1)
    chk.add_argument("--workers", type=_positive_int, default=1)
    chk.add_argument("--round-factor", type=_positive_int, default=12)
    chk.add_argument("--message-factor", type=_positive_int, default=8)
    chk.add_argument("--fault", choices=("skip-cross-edges",), default=None,
                     help=argparse.SUPPRESS)
    chk.add_argument("--out", metavar="FILE", help="report JSON")
    chk.set_defaults(func=cmd_check)

    gad = sub.add_parser("gadget", help="message-coverage and gadget experiment")
    _add_input(gad)
    gad.add_argument("--edge", required=True, metavar="U,V")
    gad.set_defaults(func=cmd_gadget)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BiconError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
