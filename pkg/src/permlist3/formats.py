"""Line-oriented instance and colouring files.

Instance files ('#' starts a comment, blank lines ignored)::

    p perm <n>              followed by   s v1 v2 ... vn
    p graph <n> <m>         followed by   e a b   (m times)   and   r <root>
    l <vertex> : <colour> [<colour> ...]   (vertices without a line get {1,2,3})

Colouring files hold ``v <vertex> <colour>`` lines.  Vertices are 1-based in
files and 0-based in memory.
"""

from __future__ import annotations

from collections.abc import Iterable

from .errors import ParseError
from .graph import COLOURS, Graph, graph_from_edges
from .solver import Instance


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(no, f"{what} must be an integer, got {tok!r}") from None


def parse_instance(text: str) -> Instance:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty instance file")
    no, head = lines[0]
    if head[0] != "p" or len(head) < 3:
        raise ParseError(no, "expected 'p perm <n>' or 'p graph <n> <m>'")
    mode = head[1]
    n = _int(head[2], no, "vertex count")
    if n < 1:
        raise ParseError(no, "vertex count must be positive")

    perm: list[int] | None = None
    edges: list[tuple[int, int]] = []
    root: int | None = None
    lists: dict[int, frozenset[int]] = {}
    expected_edges = 0
    if mode == "graph":
        if len(head) < 4:
            raise ParseError(no, "graph header needs an edge count")
        expected_edges = _int(head[3], no, "edge count")
    elif mode != "perm":
        raise ParseError(no, f"unknown instance kind {mode!r}")

    for no, toks in lines[1:]:
        tag = toks[0]
        if tag == "s":
            if mode != "perm":
                raise ParseError(no, "'s' line in a graph instance")
            if perm is not None:
                raise ParseError(no, "duplicate 's' line")
            if len(toks) != n + 1:
                raise ParseError(no, f"permutation needs exactly {n} values")
            perm = [_int(t, no, "permutation value") for t in toks[1:]]
        elif tag == "e":
            if mode != "graph":
                raise ParseError(no, "'e' line in a permutation instance")
            if len(toks) != 3:
                raise ParseError(no, "edge line must be 'e a b'")
            a, b = (_int(t, no, "endpoint") for t in toks[1:])
            if not (1 <= a <= n and 1 <= b <= n) or a == b:
                raise ParseError(no, f"bad edge {a} {b}")
            edges.append((a - 1, b - 1))
        elif tag == "r":
            if mode != "graph":
                raise ParseError(no, "'r' line in a permutation instance")
            if root is not None:
                raise ParseError(no, "duplicate root line")
            r = _int(toks[1], no, "root") if len(toks) == 2 else None
            if r is None or not 1 <= r <= n:
                raise ParseError(no, "root out of range")
            root = r - 1
        elif tag == "l":
            if len(toks) < 3 or toks[2] != ":":
                raise ParseError(no, "list line must be 'l <vertex> : <colours...>'")
            v = _int(toks[1], no, "vertex")
            if not 1 <= v <= n:
                raise ParseError(no, f"vertex {v} out of range")
            if v - 1 in lists:
                raise ParseError(no, f"duplicate list for vertex {v}")
            cs = set()
            for t in toks[3:]:
                c = _int(t, no, "colour")
                if c not in COLOURS:
                    raise ParseError(no, f"colour {c} outside 1..3")
                cs.add(c)
            lists[v - 1] = frozenset(cs)
        else:
            raise ParseError(no, f"unknown line tag {tag!r}")

    full = frozenset(COLOURS)
    list_tuple = tuple(lists.get(v, full) for v in range(n))
    if mode == "perm":
        if perm is None:
            raise ParseError(lines[-1][0], "missing 's' permutation line")
        return Instance.from_permutation(perm, list_tuple)
    if root is None:
        raise ParseError(lines[-1][0], "missing 'r' root line")
    if len(edges) != expected_edges:
        raise ParseError(
            lines[-1][0], f"expected {expected_edges} edges, found {len(edges)}"
        )
    return Instance.from_graph(graph_from_edges(n, edges), root, list_tuple)


def format_instance(inst: Instance, header: str | None = None) -> str:
    out = []
    if header:
        out.append(f"# {header}")
    n = inst.graph.n
    if inst.perm is not None:
        out.append(f"p perm {n}")
        out.append("s " + " ".join(str(v) for v in inst.perm))
    else:
        edges = list(inst.graph.edges())
        out.append(f"p graph {n} {len(edges)}")
        for u, v in edges:
            out.append(f"e {u + 1} {v + 1}")
        out.append(f"r {inst.root + 1}")
    full = frozenset(COLOURS)
    for v in range(n):
        if inst.lists[v] != full:
            cs = " ".join(str(c) for c in sorted(inst.lists[v]))
            out.append(f"l {v + 1} : {cs}".rstrip())
    return "\n".join(out) + "\n"


def parse_colouring(text: str, n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for no, toks in _content_lines(text):
        if toks[0] != "v" or len(toks) != 3:
            raise ParseError(no, "colouring lines must be 'v <vertex> <colour>'")
        v = _int(toks[1], no, "vertex")
        c = _int(toks[2], no, "colour")
        if not 1 <= v <= n:
            raise ParseError(no, f"vertex {v} out of range")
        if c not in COLOURS:
            raise ParseError(no, f"colour {c} outside 1..3")
        if v - 1 in out:
            raise ParseError(no, f"duplicate colour for vertex {v}")
        out[v - 1] = c
    return out


def format_colouring(colouring: dict[int, int]) -> str:
    return "".join(f"v {v + 1} {c}\n" for v, c in sorted(colouring.items()))
