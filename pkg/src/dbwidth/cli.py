"""Command-line interface.

Exit status: 0 on success (or a positive answer), 1 for a negative decision
or a failed verification, 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .core import directed_line_graph
from .errors import DbwError, GroundTooLargeError
from .generators import (
    bidirect,
    bipartite_orientation_grid,
    counterexample_family,
    grid,
    ne_dag_grid,
    random_dag,
    random_digraph,
)
from .layout import (
    DEFAULT_EXACT_CAP,
    bicut_cut,
    bi_cut_rank_width,
    branch_width,
    dbw_cut,
    directed_branch_width,
    layout_width,
    ubw_cut,
)
from .solvers import DredInstance, d_hamilton_path, d_max_cut, dag_cop_sweep, dred_search, is_hamilton_path
from .transforms import contract_edge, is_butterfly_edge, source_sink_split
from .verify import Budget, run_checks

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _digraph(args):
    return io.read_digraph(_read_input(args.graph), args.input_format)


def _ugraph(args):
    return io.read_ugraph(_read_input(args.graph), args.input_format)


def _emit(args, text_value, doc) -> None:
    if args.format == "structured":
        print(json.dumps(doc, indent=2))
    else:
        print(text_value)


def _emit_graph(args, g) -> None:
    sys.stdout.write(io.write_graph(g, "structured" if args.format == "structured" else "text"))


def _cut_for(measure: str, args):
    if measure == "bw":
        return ubw_cut(_ugraph(args))
    d = _digraph(args)
    return dbw_cut(d) if measure == "dbw" else bicut_cut(d)


def _solve_width(measure: str, args):
    mode = args.mode.replace("-", "_")
    if measure == "dbw":
        return directed_branch_width(_digraph(args), mode, cap=args.cap, seed=args.seed)
    if mode == "via_split":
        raise CliError("--mode via-split only applies to dbw")
    if measure == "bw":
        return branch_width(_ugraph(args), mode, cap=args.cap, seed=args.seed)
    return bi_cut_rank_width(_digraph(args), mode, cap=args.cap, seed=args.seed)


# --------------------------------------------------------------------------
# commands


def cmd_width(args) -> int:
    if args.layout:
        f = _cut_for(args.measure, args)
        tree = io.layout_from_doc(json.loads(Path(args.layout).read_text()), f)
        width = layout_width(tree, f).width
        _emit(args, width, {"schema_version": io.SCHEMA_VERSION, "measure": args.measure, "mode": "layout", "width": width})
        return EXIT_OK
    width, _ = _solve_width(args.measure, args)
    _emit(args, width, {"schema_version": io.SCHEMA_VERSION, "measure": args.measure, "mode": args.mode, "width": width})
    return EXIT_OK


def cmd_decompose(args) -> int:
    _, tree = _solve_width(args.measure, args)
    f = _cut_for(args.measure, args)
    if args.dot:
        sys.stdout.write(io.layout_to_dot(tree, f))
    else:
        print(json.dumps(io.layout_to_doc(tree, f), indent=2))
    return EXIT_OK


def cmd_linegraph(args) -> int:
    _emit_graph(args, directed_line_graph(_digraph(args), distinct=not args.walk))
    return EXIT_OK


def cmd_split(args) -> int:
    h, _ = source_sink_split(_digraph(args))
    _emit_graph(args, h)
    return EXIT_OK


def cmd_contract(args) -> int:
    d = _digraph(args)
    if not 0 <= args.edge < d.m:
        raise CliError(f"edge index {args.edge} not in [0, {d.m})")
    if args.kind == "butterfly" and not is_butterfly_edge(d, args.edge):
        raise CliError(f"edge {args.edge} ({d.edge_name(args.edge)}) is not a butterfly edge")
    _emit_graph(args, contract_edge(d, args.edge))
    return EXIT_OK


def cmd_solve(args) -> int:
    d = _digraph(args)
    if args.problem == "hamilton":
        found, path = d_hamilton_path(d, seed=args.seed)
        witness = [d.label(v) for v in path] if path else None
        doc = io.result_doc("hamilton", found, witness, {"path_valid": is_hamilton_path(d, path)} if found else {})
        _emit(args, ("true " + " ".join(witness)) if found else "false", doc)
        return EXIT_OK if found else EXIT_NO
    if args.problem == "maxcut":
        value, x = d_max_cut(d, seed=args.seed)
        witness = sorted(d.label(v) for v in x)
        answer = value if args.threshold is None else value >= args.threshold
        doc = io.result_doc("maxcut", answer, witness, {"value": value, "threshold": args.threshold})
        text = str(value) if args.threshold is None else str(answer).lower()
        _emit(args, text, doc)
        return EXIT_NO if args.threshold is not None and not answer else EXIT_OK
    # dred
    if args.sidecar:
        side = json.loads(Path(args.sidecar).read_text())
        k, h, s = int(side["k"]), int(side["h"]), int(side["s"])
    elif None not in (args.k, args.h, args.s):
        k, h, s = args.k, args.h, args.s
    else:
        raise CliError("dred needs --sidecar FILE or all of --k, --h, --s")
    inst = DredInstance(d, k, h, s)
    f = dred_search(inst)
    found = f is not None
    witness = sorted(d.edge_name(i) for i in f) if found else None
    doc = io.result_doc("dred", found, witness, {"k": k, "h": h, "s": s})
    _emit(args, ("true " + " ".join(witness)) if found else "false", doc)
    return EXIT_OK if found else EXIT_NO


def cmd_generate(args) -> int:
    p = args.params
    need = {"grid": 2, "gamma-grid": 1, "ne-grid": 1, "counterexample": 1, "bidirect": 0, "random": 2, "random-dag": 2}[args.family]
    if len(p) != need:
        raise CliError(f"generate {args.family} takes {need} parameter(s), got {len(p)}")
    try:
        if args.family == "grid":
            g = grid(int(p[0]), int(p[1]))
        elif args.family == "gamma-grid":
            g = bipartite_orientation_grid(int(p[0]))
        elif args.family == "ne-grid":
            g = ne_dag_grid(int(p[0]))
        elif args.family == "counterexample":
            family = dict(zip(("D", "Delta", "Delta-prime"), counterexample_family(int(p[0]))))
            g = family[args.which]
        elif args.family == "bidirect":
            g = bidirect(_ugraph(args))
        elif args.family == "random":
            g = random_digraph(int(p[0]), float(p[1]), args.seed)
        else:
            g = random_dag(int(p[0]), float(p[1]), args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit_graph(args, g)
    return EXIT_OK


def cmd_verify(args) -> int:
    budget = Budget.parse(args.caps)
    report = run_checks(args.suite, budget, args.seed, threads=args.threads)
    if args.dump:
        report.save_counterexamples(args.dump)
    if args.format == "structured":
        print(json.dumps(report.to_doc(args.timings), indent=2))
    else:
        sys.stdout.write(report.to_text(args.timings))
    return EXIT_OK if report.ok else EXIT_NO


def cmd_cops(args) -> int:
    d = _digraph(args)
    cleared, moves = dag_cop_sweep(d, args.reading)
    doc = io.result_doc(
        "cops", cleared, [d.label(v) for v in moves], {"reading": args.reading, "acyclic": bool(moves) or d.n == 0}
    )
    _emit(args, ("cleared " if cleared else "not cleared ") + " ".join(d.label(v) for v in moves), doc)
    return EXIT_OK if cleared else EXIT_NO


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text", help="output encoding")
    common.add_argument("--input-format", choices=["auto", "text", "structured"], default="auto")
    common.add_argument("--threads", type=int, default=1, help="worker processes (verify only); output is unaffected")
    common.add_argument("--seed", type=int, default=0)

    graph_arg = argparse.ArgumentParser(add_help=False)
    graph_arg.add_argument("graph", nargs="?", default="-", help="graph file, or - for standard input")

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("measure", choices=["dbw", "bw", "bcrk"])
    engine.add_argument("--mode", choices=["exact", "via-split", "via_split", "heuristic"], default="exact")
    engine.add_argument("--cap", type=int, default=DEFAULT_EXACT_CAP, help="largest block the exact engine accepts")

    parser = argparse.ArgumentParser(prog="dbwidth", description="Directed branch-width toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.commands = sub.choices

    p = sub.add_parser("width", parents=[common, engine, graph_arg], help="width of a graph")
    p.add_argument("--layout", help="score this exported layout instead of searching")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("decompose", parents=[common, engine, graph_arg], help="export an optimal (or heuristic) layout")
    p.add_argument("--dot", action="store_true", help="emit a Graphviz description instead of the layout document")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("linegraph", parents=[common, graph_arg], help="directed line graph")
    p.add_argument("--walk", action="store_true", help="also join x->y to y->x")
    p.set_defaults(func=cmd_linegraph)

    p = sub.add_parser("split", parents=[common, graph_arg], help="source-sink split")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("contract", parents=[common], help="contract an edge")
    p.add_argument("kind", choices=["edge", "butterfly"])
    p.add_argument("edge", type=int)
    p.add_argument("graph", nargs="?", default="-")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("solve", parents=[common], help="run a solver pipeline")
    p.add_argument("problem", choices=["hamilton", "maxcut", "dred"])
    p.add_argument("graph", nargs="?", default="-")
    p.add_argument("--threshold", type=int, help="maxcut: decide whether the cut reaches this value")
    p.add_argument("--sidecar", help="dred: JSON file with k, h and s")
    p.add_argument("--k", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--s", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", parents=[common], help="emit an instance")
    p.add_argument("family", choices=["grid", "gamma-grid", "ne-grid", "counterexample", "bidirect", "random", "random-dag"])
    p.add_argument("params", nargs="*")
    p.add_argument("--which", choices=["D", "Delta", "Delta-prime"], default="D", help="counterexample member")
    p.add_argument("--graph", default="-", help="bidirect: undirected input graph")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", parents=[common], help="run the check suite")
    p.add_argument("--suite", default="all", help="comma-separated check names (C1..C13) or all")
    p.add_argument("--caps", help="budget overrides, e.g. instances=50,max_edges=6")
    p.add_argument("--dump", help="directory for counterexample files")
    p.add_argument("--timings", action="store_true", help="include per-check runtimes")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cops", parents=[common, graph_arg], help="one-cop topological sweep on a DAG")
    p.add_argument("--reading", choices=["directed", "undirected"], default="directed")
    p.set_defaults(func=cmd_cops)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv and argv[0] in parser.commands:
            # intermixed parsing lets options sit between the positionals
            args = parser.commands[argv[0]].parse_intermixed_args(argv[1:])
        else:
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except GroundTooLargeError as exc:
        print(f"error: {exc} (raise --cap or use --mode heuristic)", file=sys.stderr)
    except (CliError, DbwError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
