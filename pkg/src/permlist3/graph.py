"""Graph representation, permutation construction and layer-level structure.

Vertices are dense 0-based ids internally; file formats and the CLI use
1-based labels, so the vertex labelled ``v`` in a permutation is id ``v - 1``.
Adjacency is one Python-int bitmask per vertex, which makes neighbourhood
membership tests and intersections with vertex sets O(n/64) — the pair-pruning
fixpoint and the greedy sweep live on such intersections.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .errors import DisconnectedGraphError, InputError, MalformedPermutationError, OddCycleError

COLOURS = (1, 2, 3)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set-bit indices of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit; mask must be nonzero."""
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with bitmask adjacency."""

    n: int
    adj: tuple[int, ...]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbours(self, v: int) -> Iterator[int]:
        return iter_bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1) << (u + 1)
            for v in iter_bits(rest):
                yield u, v


def validate_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    """Check that ``perm`` contains each of 1..n exactly once."""
    n = len(perm)
    if n < 1:
        raise MalformedPermutationError("permutation must be nonempty")
    seen = [False] * (n + 1)
    for v in perm:
        if not isinstance(v, int) or not 1 <= v <= n:
            raise MalformedPermutationError(f"value {v!r} out of range 1..{n}")
        if seen[v]:
            raise MalformedPermutationError(f"duplicate value {v}")
        seen[v] = True
    return tuple(perm)


def graph_from_permutation(perm: Sequence[int]) -> Graph:
    """Build the inversion graph: labels a < b are adjacent iff b precedes a.

    Two linear sweeps with running bitmasks keep this O(n^2 / 64).
    """
    perm = validate_permutation(perm)
    n = len(perm)
    adj = [0] * n
    seen = 0
    for value in perm:
        v = value - 1
        # values greater than `value` that appeared earlier are inversions
        adj[v] |= seen >> (v + 1) << (v + 1)
        seen |= 1 << v
    seen = 0
    for value in reversed(perm):
        v = value - 1
        # values smaller than `value` that appear later
        adj[v] |= seen & ((1 << v) - 1)
        seen |= 1 << v
    return Graph(n, tuple(adj))


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 1:
        raise InputError("graph needs at least one vertex")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) out of range")
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def _reach(g: Graph, start: int) -> int:
    seen = 1 << start
    frontier = g.adj[start] & ~seen
    while frontier:
        seen |= frontier
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
    return seen


def is_connected(g: Graph) -> bool:
    return _reach(g, 0) == (1 << g.n) - 1


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex lists of the connected components, each sorted, ordered by minimum."""
    out = []
    remaining = (1 << g.n) - 1
    while remaining:
        start = lowest_bit(remaining)
        comp = _reach(g, start)
        out.append(list(iter_bits(comp)))
        remaining &= ~comp
    return out


@dataclass(frozen=True)
class BipartiteComponent:
    """One connected component of a layer-induced subgraph with its bipartition.

    ``side1`` holds the component's lowest vertex; a singleton component has
    an empty ``side2``.  ``nbhd1``/``nbhd2`` are whole-graph neighbourhood
    masks of each side, cached because the greedy sweep and the forcing rules
    test them against colour masks repeatedly.
    """

    layer_index: int
    side1: tuple[int, ...]
    side2: tuple[int, ...]
    mask1: int
    mask2: int
    nbhd1: int
    nbhd2: int

    @property
    def size(self) -> int:
        return len(self.side1) + len(self.side2)

    @property
    def mask(self) -> int:
        return self.mask1 | self.mask2

    def side_of(self, v: int) -> int:
        """Mask of the side containing v."""
        if self.mask1 >> v & 1:
            return self.mask1
        if self.mask2 >> v & 1:
            return self.mask2
        raise InputError(f"vertex {v} not in component")


def bipartite_components(
    g: Graph, layer: Iterable[int], layer_index: int = -1
) -> tuple[BipartiteComponent, ...]:
    """Decompose a layer-induced subgraph into bipartite components.

    Components are reported in ascending order of their lowest vertex; the
    lowest vertex of each component lands on side1.  Raises OddCycleError if
    the induced subgraph is not bipartite.
    """
    layer_mask = layer if isinstance(layer, int) else mask_of(layer)
    out = []
    remaining = layer_mask
    while remaining:
        start = lowest_bit(remaining)
        side = {start: 0}
        queue = [start]
        while queue:
            u = queue.pop()
            for w in iter_bits(g.adj[u] & layer_mask):
                if w not in side:
                    side[w] = side[u] ^ 1
                    queue.append(w)
                elif side[w] == side[u]:
                    raise OddCycleError(
                        f"layer {layer_index} induces an odd cycle (edge {u}-{w} inside one side)",
                        layer_index,
                        (min(u, w), max(u, w)),
                    )
        side1 = tuple(sorted(v for v, s in side.items() if s == 0))
        side2 = tuple(sorted(v for v, s in side.items() if s == 1))
        m1, m2 = mask_of(side1), mask_of(side2)
        n1 = 0
        for v in side1:
            n1 |= g.adj[v]
        n2 = 0
        for v in side2:
            n2 |= g.adj[v]
        out.append(BipartiteComponent(layer_index, side1, side2, m1, m2, n1, n2))
        remaining &= ~(m1 | m2)
    return tuple(out)


def validate_proper_list_colouring(
    g: Graph, lists: Sequence[frozenset[int]], colouring: dict[int, int]
) -> bool:
    """True iff the total colouring is proper and respects every vertex's list."""
    if len(colouring) != g.n or any(v not in colouring for v in range(g.n)):
        raise InputError("colouring must assign every vertex")
    for v in range(g.n):
        c = colouring[v]
        if c not in lists[v]:
            return False
        for w in iter_bits(g.adj[v] & ((1 << v) - 1)):
            if colouring[w] == c:
                return False
    return True
