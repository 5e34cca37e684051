"""Brute-force ground truth and seeded instance generation.

The oracle walks its own adjacency lists and shares no colouring logic with
the solver, so agreement between the two is a genuine cross-check.  The
generator draws from ``random.Random`` through explicit ``randrange`` calls
only, so byte-identical output for a seed is reproducible across platforms.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .errors import InputError, OracleCapError
from .graph import COLOURS, Graph, graph_from_permutation, is_connected, iter_bits
from .solver import Instance

SOLVE_CAP = 20
ENUMERATE_CAP = 12


def _neighbour_lists(g: Graph) -> list[list[int]]:
    return [list(iter_bits(g.adj[v])) for v in range(g.n)]


def oracle_solve(
    g: Graph, lists: Sequence[frozenset[int]], cap: int = SOLVE_CAP
) -> dict[int, int] | None:
    """Exhaustive backtracking with the most-constrained vertex first.

    Returns some proper list colouring or None; deterministic for an input.
    """
    if g.n > cap:
        raise OracleCapError(f"oracle capped at {cap} vertices, got {g.n}")
    nbrs = _neighbour_lists(g)
    avail = [set(lists[v]) for v in range(g.n)]
    colour: dict[int, int] = {}

    def pick() -> int | None:
        best, best_n = None, 4
        for v in range(g.n):
            if v in colour:
                continue
            options = sum(1 for c in avail[v] if all(colour.get(w) != c for w in nbrs[v]))
            if options < best_n:
                best, best_n = v, options
        return best

    def go() -> bool:
        v = pick()
        if v is None:
            return True
        for c in sorted(avail[v]):
            if any(colour.get(w) == c for w in nbrs[v]):
                continue
            colour[v] = c
            if go():
                return True
            del colour[v]
        return False

    return dict(colour) if go() else None


def oracle_enumerate(
    g: Graph,
    lists: Sequence[frozenset[int]],
    visitor: Callable[[dict[int, int]], None] | None = None,
    cap: int = ENUMERATE_CAP,
) -> int:
    """Visit every proper list colouring exactly once; returns the count."""
    if g.n > cap:
        raise OracleCapError(f"enumeration capped at {cap} vertices, got {g.n}")
    nbrs = _neighbour_lists(g)
    colour: dict[int, int] = {}
    count = 0

    def go(v: int) -> None:
        nonlocal count
        if v == g.n:
            count += 1
            if visitor is not None:
                visitor(dict(colour))
            return
        for c in sorted(lists[v]):
            if any(colour.get(w) == c for w in nbrs[v]):
                continue
            colour[v] = c
            go(v + 1)
            del colour[v]

    go(0)
    return count


@dataclass(frozen=True)
class GenConfig:
    """Knobs for seeded instance generation.

    ``list_density`` is the chance each colour joins a non-precoloured list;
    ``precolour_rate`` the chance a vertex gets a single-colour list.  Lists
    are never left empty.

    ``shape`` picks the permutation family.  "uniform" draws uniformly and
    resamples until connected; beyond a few dozen vertices such graphs contain
    4-cliques almost surely and are then trivially uncolourable with three
    colours.  "chain" builds a connected chain of reversed blocks of two or
    three consecutive values (clique size at most 3, depth about n/2.5),
    the regime where large instances are actually decidable either way.
    """

    n: int
    seed: int
    list_density: float = 1.0
    precolour_rate: float = 0.0
    shape: str = "uniform"

    def validate(self) -> None:
        if self.n < 1:
            raise InputError("n must be positive")
        if not 0.0 <= self.list_density <= 1.0:
            raise InputError("list_density must be in [0, 1]")
        if not 0.0 <= self.precolour_rate <= 1.0:
            raise InputError("precolour_rate must be in [0, 1]")
        if self.shape not in ("uniform", "chain"):
            raise InputError(f"unknown shape {self.shape!r}")


MAX_CONNECT_RETRIES = 1000


def _random_permutation(rng: random.Random, n: int) -> list[int]:
    values = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):  # Fisher-Yates with explicit randrange calls
        j = rng.randrange(i + 1)
        values[i], values[j] = values[j], values[i]
    return values


def _chained_permutation(rng: random.Random, n: int) -> list[int]:
    """Chain of reversed blocks of 2-3 consecutive values, one bridge each.

    Writing a block in decreasing order makes it a clique; hoisting the next
    block's maximum in front of the running minimum inverts exactly that one
    cross pair, so consecutive cliques are joined by a single edge.
    """
    blocks = []
    v = 1
    while v <= n:
        size = min(n - v + 1, 2 + rng.randrange(2))
        blocks.append(list(range(v + size - 1, v - 1, -1)))
        v += size
    out = blocks[0][:]
    for block in blocks[1:]:
        last = out.pop()
        out.append(block[0])
        out.append(last)
        out.extend(block[1:])
    return out


def gen_instance(cfg: GenConfig) -> Instance:
    """Seeded random permutation of the configured shape, plus colour lists."""
    cfg.validate()
    rng = random.Random(cfg.seed)
    if cfg.shape == "chain":
        perm = _chained_permutation(rng, cfg.n)
    else:
        for _ in range(MAX_CONNECT_RETRIES):
            perm = _random_permutation(rng, cfg.n)
            if is_connected(graph_from_permutation(perm)):
                break
        else:
            raise InputError(
                f"no connected permutation graph found in {MAX_CONNECT_RETRIES} draws"
            )
    lists = []
    for _ in range(cfg.n):
        if rng.random() < cfg.precolour_rate:
            lists.append(frozenset({COLOURS[rng.randrange(3)]}))
            continue
        chosen = {c for c in COLOURS if rng.random() < cfg.list_density}
        if not chosen:
            chosen = {COLOURS[rng.randrange(3)]}
        lists.append(frozenset(chosen))
    return Instance.from_permutation(perm, lists)
