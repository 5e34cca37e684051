"""BFS layerings with the per-layer neighbourhood-nesting (multi-chain) property.

For graphs built from a permutation, rooting the BFS at the vertex labelled n
always yields such a layering: orienting every edge and every nonedge from the
smaller label to the larger is transitive in both cases, and label n is a sink
in both orientations.  Edge-list inputs supply their own root and are
validated; graphs that are not permutation graphs may still pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Sequence

from .errors import DisconnectedGraphError, InputError, NotMultiChainError
from .graph import (
    BipartiteComponent,
    Graph,
    bipartite_components,
    iter_bits,
    mask_of,
    validate_permutation,
)


@dataclass
class MultiChainOrdering:
    """BFS distance classes [L_0 .. L_k] rooted at ``root``.

    Construction does not validate the nesting property; ``is_multichain`` or
    ``build_multichain_ordering`` do.  Per-layer bipartite component
    decompositions are computed lazily because they are only defined (and only
    needed) when the layer-induced subgraphs are bipartite.
    """

    graph: Graph
    root: int
    layers: tuple[tuple[int, ...], ...]
    layer_masks: tuple[int, ...]
    layer_of: tuple[int, ...]
    validated: bool = False
    _components: dict[int, tuple[BipartiteComponent, ...]] = field(
        default_factory=dict, repr=False
    )

    @property
    def k(self) -> int:
        """Index of the last layer (the layering is [L_0 .. L_k])."""
        return len(self.layers) - 1

    def components(self, i: int) -> tuple[BipartiteComponent, ...]:
        """Bipartite components of layer i (cached). Raises OddCycleError."""
        got = self._components.get(i)
        if got is None:
            got = bipartite_components(self.graph, self.layer_masks[i], i)
            self._components[i] = got
        return got

    def component_of(self, v: int) -> BipartiteComponent:
        for comp in self.components(self.layer_of[v]):
            if comp.mask >> v & 1:
                return comp
        raise InputError(f"vertex {v} not found in its layer's components")


def choose_root(perm: Sequence[int]) -> int:
    """Root for permutation inputs: the vertex labelled n (id n-1).

    Under the smaller-to-larger orientation of both edges and nonedges, label
    n is a sink in both, which is exactly what the layering construction needs.
    """
    perm = validate_permutation(perm)
    return len(perm) - 1


def bfs_layers(g: Graph, root: int) -> MultiChainOrdering:
    """Standard BFS distance classes; deterministic since layers are sets."""
    if not 0 <= root < g.n:
        raise InputError(f"root {root} out of range")
    layer_of = [-1] * g.n
    layer_of[root] = 0
    masks = [1 << root]
    seen = 1 << root
    frontier = 1 << root
    while True:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        nxt &= ~seen
        if not nxt:
            break
        for v in iter_bits(nxt):
            layer_of[v] = len(masks)
        masks.append(nxt)
        seen |= nxt
        frontier = nxt
    if seen != (1 << g.n) - 1:
        unreached = ((1 << g.n) - 1) & ~seen
        v = (unreached & -unreached).bit_length() - 1
        raise DisconnectedGraphError(
            f"vertex {v} is unreachable from root {root}", unreached=v
        )
    layers = tuple(tuple(iter_bits(m)) for m in masks)
    return MultiChainOrdering(g, root, layers, tuple(masks), tuple(layer_of))


def _check_is_bfs(g: Graph, ordering: MultiChainOrdering) -> None:
    if sorted(v for layer in ordering.layers for v in layer) != list(range(g.n)):
        raise InputError("layers do not partition the vertex set")
    if ordering.layers[0] != (ordering.root,):
        raise InputError("layer 0 must contain exactly the root")
    k = ordering.k
    for i, layer in enumerate(ordering.layers):
        near = ordering.layer_masks[i]
        if i > 0:
            near |= ordering.layer_masks[i - 1]
        if i < k:
            near |= ordering.layer_masks[i + 1]
        for v in layer:
            if g.adj[v] & ~near:
                raise InputError(f"edge at vertex {v} jumps a layer")
            if i > 0 and not g.adj[v] & ordering.layer_masks[i - 1]:
                raise InputError(f"vertex {v} in layer {i} has no neighbour below")


def find_multichain_violation(
    g: Graph, ordering: MultiChainOrdering
) -> tuple[int, int] | None:
    """First vertex pair (by layer, then ids) whose neighbourhoods fail to nest."""
    _check_is_bfs(g, ordering)
    for i, layer in enumerate(ordering.layers):
        if len(layer) < 2:
            continue
        for delta in (-1, 1):
            j = i + delta
            if not 0 <= j <= ordering.k:
                continue
            target = ordering.layer_masks[j]
            nb = [(g.adj[v] & target, v) for v in layer]
            nb.sort(key=lambda t: (t[0].bit_count(), t[1]))
            for (small, u), (big, w) in zip(nb, nb[1:]):
                if small & ~big:
                    return (min(u, w), max(u, w))
    return None


def is_multichain(g: Graph, ordering: MultiChainOrdering) -> bool:
    """True iff within every layer both the previous- and next-layer
    neighbourhoods are pairwise inclusion-comparable."""
    return find_multichain_violation(g, ordering) is None


def build_multichain_ordering(g: Graph, root: int) -> MultiChainOrdering:
    """BFS layering plus validation; the returned ordering caches components."""
    ordering = bfs_layers(g, root)
    witness = find_multichain_violation(g, ordering)
    if witness is not None:
        raise NotMultiChainError(
            f"neighbourhoods of vertices {witness[0]} and {witness[1]} are incomparable",
            witness=witness,
        )
    ordering.validated = True
    return ordering


def max_neighbourhood_vertex(g: Graph, side: Sequence[int], target_layer: int) -> int:
    """Member of ``side`` whose neighbourhood inside ``target_layer`` (a mask)
    contains every other member's; ties go to the lowest id."""
    if not side:
        raise InputError("side must be nonempty")
    best_v = -1
    best_nb = -1
    for v in sorted(side):
        nb = g.adj[v] & target_layer
        if best_nb == -1 or (nb != best_nb and nb.bit_count() > best_nb.bit_count()):
            best_v, best_nb = v, nb
    for v in side:
        if (g.adj[v] & target_layer) & ~best_nb:
            raise InputError(
                f"neighbourhoods of {v} and {best_v} in the target layer do not nest"
            )
    return best_v


def check_orientation_lemmas(perm: Sequence[int], ordering: MultiChainOrdering) -> bool:
    """Validate the two orientation facts the layering construction rests on.

    Under the smaller-to-larger orientation: (a) edges between consecutive
    layers all point into the same layer per boundary; (b) every nonedge
    between distinct layers has its head (the larger label) in the
    lower-indexed layer.  Test-support; O(n^2).
    """
    g = ordering.graph
    n = g.n
    for i in range(ordering.k):
        toward_upper = None
        upper = ordering.layer_masks[i + 1]
        for u in ordering.layers[i]:
            for w in iter_bits(g.adj[u] & upper):
                head_upper = w > u
                if toward_upper is None:
                    toward_upper = head_upper
                elif toward_upper != head_upper:
                    return False
    for u in range(n):
        non = ~g.adj[u] & ((1 << n) - 1) & ~(1 << u)
        for w in iter_bits(non >> (u + 1) << (u + 1)):
            lu, lw = ordering.layer_of[u], ordering.layer_of[w]
            if lu == lw:
                continue
            # w > u, so w is the head and must sit in the lower-indexed layer
            if not lw < lu:
                return False
    return True
