"""Command-line surface: solve, verify, gen, check-ordering, bench, dot.

Exit codes: 0 feasible/valid, 1 infeasible/invalid, 2 malformed input or
usage error, so shell harnesses need no output parsing.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from .errors import DisconnectedGraphError, InputError, NotMultiChainError, ParseError, PermList3Error
from .formats import format_colouring, format_instance, parse_colouring, parse_instance
from .graph import validate_proper_list_colouring
from .ordering import bfs_layers, choose_root, find_multichain_violation
from .oracle import GenConfig, gen_instance
from .solver import solve, solve_components, solve_with_trace

_BENCH_SEED = 824000


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    if args.components:
        verdict = solve_components(inst.graph, inst.lists)
    elif args.trace:
        verdict, trace = solve_with_trace(inst)
        for event in trace.events:
            print(f"c {event}")
    else:
        verdict = solve(inst)
    if verdict.feasible:
        print("s FEASIBLE")
        sys.stdout.write(format_colouring(verdict.colouring))
        return 0
    print("s INFEASIBLE")
    print(f"w {verdict.witness.describe()}")
    return 1


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    colouring = parse_colouring(_read(args.colouring), inst.graph.n)
    ok = validate_proper_list_colouring(inst.graph, inst.lists, colouring)
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def cmd_gen(args) -> int:
    cfg = GenConfig(
        n=args.n,
        seed=args.seed,
        list_density=args.list_density,
        precolour_rate=args.precolour_rate,
        shape=args.shape,
    )
    inst = gen_instance(cfg)
    header = (
        f"n={cfg.n} seed={cfg.seed} list-density={cfg.list_density:g} "
        f"precolour-rate={cfg.precolour_rate:g} shape={cfg.shape}"
    )
    sys.stdout.write(format_instance(inst, header=header))
    return 0


def cmd_check_ordering(args) -> int:
    inst = parse_instance(_read(args.instance))
    root = inst.root if inst.perm is None else choose_root(inst.perm)
    ordering = bfs_layers(inst.graph, root)
    for i, layer in enumerate(ordering.layers):
        print(f"layer {i}: " + " ".join(str(v + 1) for v in layer))
    witness = find_multichain_violation(inst.graph, ordering)
    if witness is None:
        print("multichain")
        return 0
    print(f"violation {witness[0] + 1} {witness[1] + 1}")
    return 1


def cmd_bench(args) -> int:
    sizes = []
    for tok in args.sizes.split(","):
        tok = tok.strip()
        if tok:
            sizes.append(int(tok))
    if not sizes or any(s < 2 for s in sizes) or args.reps < 1:
        raise InputError("need at least one size >= 2 and reps >= 1")
    rows = []
    for idx, n in enumerate(sizes):
        total = 0.0
        for rep in range(args.reps):
            # deep chained instances: uniform permutations of this size are
            # 4-clique-bound and trivially infeasible
            inst = gen_instance(
                GenConfig(n=n, seed=_BENCH_SEED + 1000 * idx + rep,
                          list_density=1.0, precolour_rate=0.1, shape="chain")
            )
            t0 = time.perf_counter()
            solve(inst)
            total += time.perf_counter() - t0
        rows.append((n, total / args.reps * 1000.0))
    slope = fitted_exponent(rows)
    out = sys.stdout if args.csv is None else open(args.csv, "w", encoding="utf-8")
    try:
        out.write("n,mean_ms,slope\n")
        for n, ms in rows:
            out.write(f"{n},{ms:.3f},{'' if slope is None else f'{slope:.3f}'}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def fitted_exponent(rows: list[tuple[int, float]]) -> float | None:
    """Least-squares slope of log(ms) against log(n)."""
    pts = [(math.log(n), math.log(ms)) for n, ms in rows if ms > 0]
    if len(pts) < 2:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    den = sum((x - mx) ** 2 for x, _ in pts)
    if den == 0:
        return None
    return sum((x - mx) * (y - my) for x, y in pts) / den


_FILL = {1: "#e41a1c", 2: "#4daf4a", 3: "#377eb8"}


def cmd_dot(args) -> int:
    inst = parse_instance(_read(args.instance))
    colouring: dict[int, int] = {}
    if args.colouring is not None:
        colouring = parse_colouring(_read(args.colouring), inst.graph.n)
    root = inst.root if inst.perm is None else choose_root(inst.perm)
    ordering = bfs_layers(inst.graph, root)
    lines = ["graph G {", "  rankdir=TB;", '  node [style=filled, fillcolor="white"];']
    for layer in ordering.layers:
        names = " ".join(f"n{v + 1};" for v in layer)
        lines.append(f"  {{ rank=same; {names} }}")
    for v in range(inst.graph.n):
        attrs = [f'label="{v + 1}"']
        if v in colouring:
            attrs.append(f'fillcolor="{_FILL[colouring[v]]}"')
        lines.append(f"  n{v + 1} [{', '.join(attrs)}];")
    for u, v in inst.graph.edges():
        lines.append(f"  n{u + 1} -- n{v + 1};")
    lines.append("}")
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permlist3",
        description="Exact 3-colour list colouring of permutation graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide and construct a colouring")
    p.add_argument("instance")
    p.add_argument("--trace", action="store_true", help="emit 'c' trace lines")
    p.add_argument(
        "--components", action="store_true",
        help="solve disconnected inputs componentwise",
    )
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a colouring against an instance")
    p.add_argument("instance")
    p.add_argument("colouring")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="emit a seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--list-density", type=float, default=1.0)
    p.add_argument("--precolour-rate", type=float, default=0.0)
    p.add_argument("--shape", choices=("uniform", "chain"), default="uniform")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check-ordering", help="report BFS layers and nesting")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check_ordering)

    p = sub.add_parser("bench", help="time solves and fit a log-log exponent")
    p.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dot", help="emit a layer-ranked DOT drawing")
    p.add_argument("instance")
    p.add_argument("colouring", nargs="?", default=None)
    p.set_defaults(func=cmd_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, InputError, DisconnectedGraphError, NotMultiChainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except PermList3Error as err:
        print(f"internal error: {err}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
