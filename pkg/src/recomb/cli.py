"""Command-line interface: validate / transform / explore / decide / gen / sample.

Exit codes: 0 success, 2 validation failure (report on stderr), 1 usage or
input errors.
"""

from __future__ import annotations

import argparse
import sys

from .graphs import Graph, GraphFormatError, format_graph, parse_graph
from .hamiltonian import CycleOrder, transform_hamiltonian
from .instances import (
    arc_partition,
    gen_cycle,
    gen_grid,
    gen_negative,
    gen_path,
    gen_random_connected,
)
from .ncl import format_map, parse_ncl, reduce_ncl
from .oracle import OracleCapError, build_space, decide_br, recom_walk, space_stats
from .partitions import (
    Partition,
    SlackBound,
    apply_move,
    format_moves,
    format_partition,
    parse_moves,
    parse_partition,
    validate,
)
from .sequences import replay
from .unbounded import transform_unbounded

_DOT_COLORS = [
    "lightblue", "lightcoral", "palegreen", "khaki", "plum", "lightsalmon",
    "lightseagreen", "wheat", "thistle", "powderblue", "darkseagreen",
    "rosybrown", "lightsteelblue", "tan",
]


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _load_graph(path: str) -> Graph:
    return parse_graph(_read(path))


def _load_partition(path: str) -> Partition:
    return parse_partition(_read(path))


def _load_cycle(path: str, n: int) -> CycleOrder:
    order = tuple(int(x) for x in _read(path).split())
    if len(order) != n:
        raise ValueError(f"cycle file lists {len(order)} vertices, graph has {n}")
    return CycleOrder(order)


def format_cycle(cycle: CycleOrder) -> str:
    return " ".join(str(v) for v in cycle.order) + "\n"


def dot_export(g: Graph, p: Partition | None = None) -> str:
    lines = ["graph G {", "  node [style=filled];"]
    label = {}
    if p is not None:
        for i, d in enumerate(p.districts):
            for v in d:
                label[v] = i
    for v in range(g.n):
        if v in label:
            color = _DOT_COLORS[label[v] % len(_DOT_COLORS)]
            lines.append(f'  {v} [fillcolor="{color}"];')
        else:
            lines.append(f"  {v};")
    for a, b in sorted(g.edges):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _validation_failure(report) -> int:
    for v in report.violations:
        print(v, file=sys.stderr)
    return 2


def cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    p = _load_partition(args.partition)
    slack = SlackBound.parse(args.slack)
    rep = validate(g, p, args.k, slack)
    if not rep.ok:
        return _validation_failure(rep)
    print("OK")
    if args.dot:
        _write(args.dot, dot_export(g, p))
    return 0


def cmd_transform(args) -> int:
    g = _load_graph(args.graph)
    p1 = _load_partition(getattr(args, "from"))
    p2 = _load_partition(args.to)
    slack = SlackBound.parse(args.slack)
    for name, p in (("from", p1), ("to", p2)):
        rep = validate(g, p, p.k, slack)
        if not rep.ok:
            print(f"invalid '{name}' partition:", file=sys.stderr)
            return _validation_failure(rep)
    if args.mode == "unbounded":
        moves = transform_unbounded(g, p1, p2)
    else:
        if not args.cycle:
            raise ValueError(
                "--mode hamiltonian requires --cycle; it applies the bounded-slack "
                "transformation along a Hamilton cycle with s >= n/k"
            )
        cycle = _load_cycle(args.cycle, g.n)
        moves = transform_hamiltonian(g, cycle, p1, p2, slack)
    _write(args.out, format_moves(moves))
    print(len(moves))
    if args.dot:
        _write(args.dot, dot_export(g, p2))
    return 0


def cmd_explore(args) -> int:
    g = _load_graph(args.graph)
    slack = SlackBound.parse(args.slack)
    cg = build_space(g, args.k, slack)
    st = space_stats(cg)
    print(f"nodes {st.node_count}")
    print(f"edges {st.edge_count}")
    print(f"components {st.component_count}")
    print("diameters " + " ".join(str(d) for d in st.diameters))
    if args.dot:
        _write(args.dot, dot_export(g))
    return 0


def cmd_decide(args) -> int:
    g = _load_graph(args.graph)
    p1 = _load_partition(getattr(args, "from"))
    p2 = _load_partition(args.to)
    slack = SlackBound.parse(args.slack)
    for name, p in (("from", p1), ("to", p2)):
        rep = validate(g, p, args.k, slack)
        if not rep.ok:
            print(f"invalid '{name}' partition:", file=sys.stderr)
            return _validation_failure(rep)
    reachable, path = decide_br(g, args.k, slack, p1, p2)
    if reachable:
        print(f"REACHABLE {len(path)}")
        if args.out:
            _write(args.out, format_moves(path))
    else:
        print("UNREACHABLE")
    return 0


def cmd_gen(args) -> int:
    prefix = args.out
    if args.family == "cycle":
        g = gen_cycle(args.n)
    elif args.family == "path":
        g = gen_path(args.n)
    elif args.family == "grid":
        g = gen_grid(args.width, args.height)
    elif args.family == "random":
        g = gen_random_connected(args.n, args.m, args.seed)
    elif args.family == "negative":
        g, pa, cycle = gen_negative(args.k, args.s)
        _write(prefix + ".graph", format_graph(g))
        _write(prefix + ".a.part", format_partition(pa, g.n))
        _write(prefix + ".b.part", format_partition(arc_partition(g.n, args.k), g.n))
        _write(prefix + ".cycle", format_cycle(cycle))
        if args.dot:
            _write(args.dot, dot_export(g, pa))
        print(f"n {g.n}")
        return 0
    elif args.family == "ncl":
        ncl, orients = parse_ncl(_read(args.ncl))
        if "A" not in orients or "B" not in orients:
            raise ValueError("NCL file must contain 'orient A' and 'orient B' blocks")
        r = reduce_ncl(ncl, orients["A"], orients["B"], args.s)
        _write(prefix + ".graph", format_graph(r.graph))
        _write(prefix + ".a.part", format_partition(r.pi_a, r.graph.n))
        _write(prefix + ".b.part", format_partition(r.pi_b, r.graph.n))
        _write(prefix + ".map.jsonl", format_map(r))
        if args.dot:
            _write(args.dot, dot_export(r.graph, r.pi_a))
        print(f"n {r.graph.n}")
        print(f"k {r.k}")
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown family {args.family}")
    _write(prefix + ".graph", format_graph(g))
    if args.dot:
        _write(args.dot, dot_export(g))
    print(f"n {g.n}")
    return 0


def cmd_sample(args) -> int:
    g = _load_graph(args.graph)
    p = _load_partition(args.partition)
    slack = SlackBound.parse(args.slack)
    rep = validate(g, p, args.k, slack)
    if not rep.ok:
        return _validation_failure(rep)
    trace = recom_walk(g, args.k, slack, p, args.steps, args.seed)
    print(f"seed {trace.seed}")
    print(f"steps {len(trace.steps)}")
    print(f"halted {'yes' if trace.halted_early else 'no'}")
    if args.out:
        lines = []
        for idx, key in trace.steps:
            flat = ";".join(",".join(str(v) for v in d) for d in key)
            lines.append(f"s {idx} {flat}")
        _write(args.out, "\n".join(lines) + ("\n" if lines else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="recomb",
        description="Balanced connected partitions under recombination moves.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, k=False, slack=False, dot=True):
        if k:
            p.add_argument("--k", type=int, required=True)
        if slack:
            p.add_argument("--slack", required=True, help="integer slack or 'inf'")
        if dot:
            p.add_argument("--dot", help="write a DOT rendering to this path")

    p = sub.add_parser("validate", help="check a partition against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition", required=True)
    add_common(p, k=True, slack=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("transform", help="compute a recombination sequence")
    p.add_argument("--mode", choices=["unbounded", "hamiltonian"], required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--cycle", help="Hamilton cycle file (hamiltonian mode)")
    p.add_argument("--out", required=True)
    add_common(p, slack=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("explore", help="enumerate the configuration space")
    p.add_argument("--graph", required=True)
    add_common(p, k=True, slack=True)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("decide", help="reachability between two partitions")
    p.add_argument("--graph", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--out", help="write the move sequence here when reachable")
    add_common(p, k=True, slack=True)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("gen", help="generate instance files")
    p.add_argument(
        "--family",
        choices=["cycle", "path", "grid", "random", "negative", "ncl"],
        required=True,
    )
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--ncl", help="NCL instance file (ncl family)")
    p.add_argument("--out", required=True, help="output path prefix")
    add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sample", help="seeded random recombination walk")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    add_common(p, k=True, slack=True)
    p.set_defaults(func=cmd_sample)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (GraphFormatError, OracleCapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
