"""Command-line interface.

    oddcover gen complete 8 | oddcover solve
    oddcover gen cycle 6 | oddcover construct bipartite
    oddcover verify --graph g.g6 --cover c.json

Exit codes: 0 ok, 1 verification failure, 2 malformed input, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import graph as gmod
from .construct import FAMILIES, ConstructionError, construct
from .cover import cover_from_json, cover_to_dict, verify
from .formats import GraphFormatError, parse_graph, to_graph6
from .gf2 import rank
from .graph import Graph
from .search import EXACT, SearchConfig, default_threads, exact_b2, lower_bound, upper_bound

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

GENERATORS = {
    "complete": (gmod.complete, 1),
    "cycle": (gmod.cycle, 1),
    "path": (gmod.path, 1),
    "empty": (gmod.empty, 1),
    "star": (gmod.star, 1),
    "triangles": (gmod.k_triangles, 1),
    "bipartite": (gmod.complete_bipartite, 2),
    "Bk": (gmod.graph_Bk, 1),
    "Tk": (gmod.graph_Tk, 1),
}


class InputError(Exception):
    pass


def generate(spec: list[str]) -> Graph:
    if not spec:
        raise InputError("generator spec is empty")
    name, params = spec[0], spec[1:]
    if name not in GENERATORS:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(GENERATORS)}")
    fn, arity = GENERATORS[name]
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} integer parameter(s)")
    try:
        args = [int(p) for p in params]
    except ValueError:
        raise InputError(f"{name} parameters must be integers") from None
    try:
        return fn(*args)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(args: argparse.Namespace) -> Graph:
    sources = [s for s in (args.graph, args.g6, args.family) if s is not None]
    if len(sources) > 1:
        raise InputError("give exactly one of --graph, --g6, --family")
    if args.family is not None:
        return generate(args.family.split())
    text = args.g6 if args.g6 is not None else _read(args.graph or "-")
    try:
        return parse_graph(text)
    except (GraphFormatError, ValueError) as exc:
        raise InputError(f"malformed graph: {exc}") from None


def _emit(data: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(data))
        return
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        print(f"{key}: {value}")


# -- verbs --------------------------------------------------------------------


def cmd_gen(args) -> int:
    print(to_graph6(generate([args.name] + args.params)))
    return EXIT_OK


def cmd_rank(args) -> int:
    g = load_graph(args)
    r = rank(g.adj)
    if args.format == "json":
        print(json.dumps({"n": g.n, "r2": r}))
    else:
        print(r)
    return EXIT_OK


def cmd_bounds(args) -> int:
    g = load_graph(args)
    ub, witness = upper_bound(g)
    _emit({"lb": lower_bound(g), "ub": ub, "witness": cover_to_dict(witness)}, args.format)
    return EXIT_OK


def cmd_construct(args) -> int:
    g = load_graph(args)
    try:
        res = construct(g, args.name, best=args.best)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = cover_to_dict(res.cover)
    out["construction"] = res.metadata()
    _emit(out, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.graph is None and args.g6 is None and args.family is None:
        raise InputError("verify needs --graph (or --g6 / --family)")
    g = load_graph(args)
    try:
        cover = cover_from_json(_read(args.cover))
    except (ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"malformed cover: {exc}") from None
    try:
        report = verify(cover, g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(report.to_dict(), args.format)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_solve(args) -> int:
    g = load_graph(args)
    cfg = SearchConfig(
        max_k=args.max_k,
        time_budget=args.time,
        node_budget=args.nodes,
        deterministic=args.deterministic,
        threads=args.threads if args.threads is not None else default_threads(),
    )
    res = exact_b2(g, cfg)
    _emit(res.to_dict(), args.format)
    return EXIT_OK if res.status == EXACT else EXIT_BUDGET


# -- parser -------------------------------------------------------------------


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oddcover", description="Odd covers of graphs.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("--graph", help="graph6 or edge-list file ('-' for stdin, the default)")
        p.add_argument("--g6", help="inline graph6 string")
        p.add_argument("--family", help="generator spec, e.g. 'complete 8' or 'Tk 2'")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("gen", help="emit a generated graph as graph6")
    p.add_argument("name", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("rank", help="print the 2-rank")
    with_input(p)
    p.set_defaults(func=cmd_rank, format="text")

    p = sub.add_parser("bounds", help="lower and upper bounds on b2 with a witness cover")
    with_input(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="build an odd cover")
    p.add_argument("name", nargs="?", default="auto", choices=("auto",) + tuple(FAMILIES))
    p.add_argument("--best", action="store_true", help="run every applicable construction, keep the smallest")
    with_input(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a cover against a graph (exit 1 on failure)")
    p.add_argument("--cover", required=True, help="cover JSON file ('-' for stdin)")
    with_input(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact b2 by exhaustive search")
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--time", type=_positive_float, help="wall-clock budget in seconds")
    p.add_argument("--nodes", type=_positive_int, help="search node budget")
    p.add_argument("--threads", type=_positive_int, help="worker processes (default $ODDCOVER_THREADS or 1)")
    p.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=True)
    with_input(p)
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"oddcover: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        print(f"oddcover: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
