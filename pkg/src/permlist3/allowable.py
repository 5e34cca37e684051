"""Per-boundary pruning of layer colour-pair assignments, run to fixpoint.

Entry i of the array holds the ordered (lower-pair, upper-pair) assignments
still considered possible for layers (L_i, L_{i+1}).  Pruning removes a pair
when a precoloured vertex contradicts it, when a directly forced edge clashes
under it, when it lost its last predecessor or successor, or when its forced
downward extension cannot be coloured by the greedy sweep.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .colouring import (
    PAIRS,
    Pair,
    compute_quasi_precolouring,
    conservative_colouring,
    shared_colour,
)
from .errors import InputError, InternalInvariantError
from .graph import COLOURS, Graph, iter_bits
from .ordering import MultiChainOrdering

AllowablePair = tuple[Pair, Pair]

ALL_ALLOWABLE_PAIRS: tuple[AllowablePair, ...] = tuple(
    sorted((lo, up) for lo in PAIRS for up in PAIRS if lo != up)
)


@dataclass
class AllowableArray:
    entries: list[set[AllowablePair]]

    @property
    def k(self) -> int:
        return len(self.entries)

    def copy(self) -> "AllowableArray":
        return AllowableArray([set(e) for e in self.entries])


def init_full_array(k: int) -> AllowableArray:
    """All six ordered pairs of distinct colour pairs at every boundary."""
    if k < 1:
        raise InputError("need at least one layer boundary")
    return AllowableArray([set(ALL_ALLOWABLE_PAIRS) for _ in range(k)])


RemoveHook = Callable[[int, AllowablePair, str], None]


def fixed_pass(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    a: AllowableArray,
    on_remove: RemoveHook | None = None,
) -> AllowableArray:
    """One-shot pruning from the lists alone; mutates and returns ``a``.

    First, a layer holding a vertex precoloured c loses every pair that does
    not give it c, at both touching boundaries.  Second, an edge between
    consecutive layers whose endpoint lists each meet their side of a
    candidate (lower, upper) pair in exactly the shared colour kills that
    candidate.
    """

    def remove(i: int, w: AllowablePair, reason: str) -> None:
        a.entries[i].discard(w)
        if on_remove is not None:
            on_remove(i, w, reason)

    k = a.k
    for i in range(k + 1):
        pre = set()
        for v in ordering.layers[i]:
            if len(lists[v]) == 1:
                pre.add(next(iter(lists[v])))
        for c in sorted(pre):
            bad = tuple(sorted(set(COLOURS) - {c}))
            if i <= k - 1:
                for w in [w for w in a.entries[i] if w[0] == bad]:
                    remove(i, w, "precoloured")
            if i >= 1:
                for w in [w for w in a.entries[i - 1] if w[1] == bad]:
                    remove(i - 1, w, "precoloured")

    for i in range(k):
        upper_mask = ordering.layer_masks[i + 1]
        for w in sorted(a.entries[i]):
            lower, upper = w
            shared = shared_colour(lower, upper)
            if _edge_forces_shared(g, ordering, lists, i, lower, upper, shared, upper_mask):
                remove(i, w, "forced-edge")
    return a


def _edge_forces_shared(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    i: int,
    lower: Pair,
    upper: Pair,
    shared: int,
    upper_mask: int,
) -> bool:
    lo_set, up_set = frozenset(lower), frozenset(upper)
    for v in ordering.layers[i]:
        if lists[v] & lo_set != {shared}:
            continue
        for u in iter_bits(g.adj[v] & upper_mask):
            if lists[u] & up_set == {shared}:
                return True
    return False


def forces_quasi_bad(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    a: AllowableArray,
    i: int,
    w: AllowablePair,
    _cache: dict | None = None,
) -> bool:
    """Extend w (spanning layers i-1, i) downward while the array leaves a
    single choice, then test whether the greedy sweep fails on that segment.

    The sweep returns False exactly when the forced segment cannot be
    coloured, which is when the pair must go.  The outcome depends only on
    the extended segment, so callers running the pruning loop pass a cache.
    """
    if not 1 <= i <= a.k:
        raise InputError(f"upper layer index {i} out of range")
    lower, upper = w
    q: dict[int, Pair] = {i - 1: lower, i: upper}
    counter = i - 1
    below = lower
    while counter - 1 >= 0:
        matches = [p for p in a.entries[counter - 1] if p[1] == below]
        if len(matches) != 1:
            break
        counter -= 1
        below = matches[0][0]
        q[counter] = below
    if _cache is None:
        return not conservative_colouring(g, ordering, lists, q, counter, i).success
    key = (counter, i, tuple(q[j] for j in range(counter, i + 1)))
    got = _cache.get(key)
    if got is None:
        got = not conservative_colouring(g, ordering, lists, q, counter, i).success
        _cache[key] = got
    return got


class TripleChecker:
    """Conflict test for three consecutive layers under a candidate assignment.

    Two adjacent boundary pairs with a common middle can force contradictory
    colours that neither boundary sees alone (a vertex squeezed between
    components of both flanking layers, or forced vertices meeting over an
    edge).  Any colouring's own covering assignment is conflict-free on every
    such triple, so demanding a conflict-free neighbour never strands one.
    Results depend only on the instance, so they are cached across sweeps.
    """

    def __init__(self, g: Graph, ordering: MultiChainOrdering, lists) -> None:
        self.g = g
        self.ordering = ordering
        self.lists = lists
        self._cache: dict[tuple, bool] = {}

    def conflict_free(self, lo: int, q: dict[int, Pair]) -> bool:
        key = (lo, tuple(sorted(q.items())))
        got = self._cache.get(key)
        if got is None:
            qp = compute_quasi_precolouring(
                self.g, self.ordering, self.lists, q, lo, lo + len(q) - 1
            )
            got = qp.conflict is None
            self._cache[key] = got
        return got


def generate_allowable_array(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    on_remove: RemoveHook | None = None,
) -> AllowableArray:
    """Full construction: initialise, prune from lists, then sweep until no
    pair loses its predecessor, its successor, or its forced-extension check.

    Predecessor and successor checks require a neighbour that agrees on the
    shared layer and is conflict-free jointly over the three layers involved.
    """
    k = ordering.k
    a = init_full_array(k)
    fixed_pass(g, ordering, lists, a, on_remove)
    triples = TripleChecker(g, ordering, lists)

    def remove(i: int, w: AllowablePair, reason: str) -> None:
        a.entries[i].discard(w)
        if on_remove is not None:
            on_remove(i, w, reason)

    def has_predecessor(i: int, w: AllowablePair) -> bool:
        if i == 0:
            return True
        lower, upper = w
        return any(
            p[1] == lower
            and triples.conflict_free(i - 1, {i - 1: p[0], i: lower, i + 1: upper})
            for p in a.entries[i - 1]
        )

    def has_successor(i: int, w: AllowablePair) -> bool:
        if i == k - 1:
            return True
        lower, upper = w
        return any(
            p[0] == upper
            and triples.conflict_free(i, {i: lower, i + 1: upper, i + 2: p[1]})
            for p in a.entries[i + 1]
        )

    run_cache: dict = {}

    def check_boundary(i: int) -> bool:
        entry = a.entries[i]
        any_change = False
        for w in sorted(entry):
            if not has_predecessor(i, w):
                remove(i, w, "no-predecessor")
                any_change = True
                continue
            if not has_successor(i, w):
                remove(i, w, "no-successor")
                any_change = True
        for w in sorted(entry):
            if forces_quasi_bad(g, ordering, lists, a, i + 1, w, run_cache):
                remove(i, w, "quasi-bad-forcing")
                any_change = True
        return any_change

    changed = True
    while changed:
        changed = False
        # alternate directions so removal cascades cross the whole array in
        # one iteration instead of one boundary per sweep
        for i in range(k):
            changed |= check_boundary(i)
        for i in range(k - 1, -1, -1):
            changed |= check_boundary(i)
    return a


def has_empty_entry(a: AllowableArray) -> int | None:
    for i, entry in enumerate(a.entries):
        if not entry:
            return i
    return None


def render_pair(w: AllowablePair) -> str:
    lower, upper = w
    return f"{lower[0]}{lower[1]}|{upper[0]}{upper[1]}"


def render_array(a: AllowableArray) -> str:
    """One line per boundary; pairs like ``12|23`` joined by commas."""
    return "\n".join(",".join(render_pair(w) for w in sorted(e)) for e in a.entries)
