"""Colour pairs, list mappings, forced-colour propagation, and the greedy sweep.

Terminology used throughout: a layer assignment Q gives every layer an
unordered pair of the three colours.  Relative to layer i, ``not_below`` is
the colour of Q(i) not shared with Q(i+1) and ``with_below`` the shared one;
the greedy sweep prefers ``not_below`` because nothing in the next layer can
ever carry it.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .errors import InputError
from .graph import COLOURS, Graph, iter_bits, lowest_bit
from .ordering import MultiChainOrdering

Pair = tuple[int, int]
PAIRS: tuple[Pair, ...] = ((1, 2), (1, 3), (2, 3))


def as_pair(a: int, b: int) -> Pair:
    if a == b or a not in COLOURS or b not in COLOURS:
        raise InputError(f"not a pair of distinct colours: {a}, {b}")
    return (a, b) if a < b else (b, a)


def diff_colour(p: Pair, q: Pair) -> int:
    """The colour of p not in q; p and q must be distinct pairs."""
    if p == q:
        raise InputError("pairs must differ")
    return p[0] if p[0] not in q else p[1]


def shared_colour(p: Pair, q: Pair) -> int:
    """The single colour two distinct pairs have in common."""
    if p == q:
        raise InputError("pairs must differ")
    return p[0] if p[0] in q else p[1]


def other_colour(p: Pair, c: int) -> int:
    if c == p[0]:
        return p[1]
    if c == p[1]:
        return p[0]
    raise InputError(f"colour {c} not in pair {p}")


def full_lists(n: int) -> tuple[frozenset[int], ...]:
    full = frozenset(COLOURS)
    return (full,) * n


def make_lists(n: int, special: dict[int, set[int] | frozenset[int]] | None = None):
    """Lists for n vertices: full by default, overridden per vertex id."""
    special = special or {}
    out = []
    for v in range(n):
        cs = frozenset(special.get(v, COLOURS))
        if not cs <= frozenset(COLOURS):
            raise InputError(f"list of vertex {v} uses colours outside 1..3")
        out.append(cs)
    return tuple(out)


def validate_good_assignment(
    ordering: MultiChainOrdering, lists: Sequence[frozenset[int]], q: dict[int, Pair]
) -> None:
    """Check q is total on the layering and good; raise InputError otherwise."""
    for i in range(ordering.k + 1):
        pair = q.get(i)
        if pair not in PAIRS:
            raise InputError(f"layer {i} missing a valid colour pair")
        if i > 0 and q[i - 1] == pair:
            raise InputError(f"layers {i - 1} and {i} share the same pair")
        for v in ordering.layers[i]:
            if len(lists[v]) == 1:
                (c,) = lists[v]
                if c not in pair:
                    raise InputError(
                        f"precoloured vertex {v} (colour {c}) not covered by layer pair {pair}"
                    )


@dataclass(frozen=True)
class Conflict:
    """Why a forced partial colouring is self-contradictory."""

    kind: str  # "double-force" | "list-exhausted" | "adjacent-equal"
    vertices: tuple[int, ...]
    layer: int
    colours: tuple[int, ...]
    sources: tuple[str, ...] = ()


@dataclass
class QuasiPrecolouring:
    forced: dict[int, int]
    conflict: Conflict | None = None


def _pair_set(p: Pair) -> frozenset[int]:
    return frozenset(p)


def compute_quasi_precolouring(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    q: dict[int, Pair],
    start: int,
    end: int,
) -> QuasiPrecolouring:
    """Fixpoint of the three forcing rules on layers [start, end].

    Rule 1: a vertex whose list meets its layer pair in a single colour takes
    that colour.  Rule 2: a vertex adjacent to both sides of a component of an
    adjacent in-range layer must avoid that layer's whole pair, leaving one
    colour.  Rule 3: inside a layer component, one forced vertex fixes both
    sides by parity.  A contradiction is returned as data, not raised.
    """
    forced: dict[int, int] = {}
    source: dict[int, str] = {}
    result = QuasiPrecolouring(forced)

    def seed(v: int, c: int, src: str) -> bool:
        """Record a forcing; return False when it contradicts an earlier one."""
        if v in forced:
            if forced[v] != c:
                result.conflict = Conflict(
                    "double-force",
                    (v,),
                    ordering.layer_of[v],
                    (forced[v], c),
                    (source[v], src),
                )
                return False
            return True
        if c not in lists[v]:
            result.conflict = Conflict(
                "list-exhausted", (v,), ordering.layer_of[v], (c,), (src,)
            )
            return False
        forced[v] = c
        source[v] = src
        return True

    for i in range(start, end + 1):
        pair = q[i]
        pset = _pair_set(pair)
        for v in ordering.layers[i]:
            inter = lists[v] & pset
            if len(inter) == 1:
                if not seed(v, next(iter(inter)), "list"):
                    return result
        for t in (i - 1, i + 1):
            if not 0 <= t <= ordering.k or q.get(t) is None:
                continue
            colour = diff_colour(pair, q[t])
            src = "below" if t < i else "above"
            for comp in ordering.components(t):
                if not comp.side2:
                    continue
                cand = comp.nbhd1 & comp.nbhd2 & ordering.layer_masks[i]
                for v in iter_bits(cand):
                    if not seed(v, colour, src):
                        return result

    for i in range(start, end + 1):
        pair = q[i]
        for comp in ordering.components(i):
            members = comp.side1 + comp.side2
            anchor = None
            for v in members:
                if v in forced:
                    anchor = v
                    break
            if anchor is None:
                continue
            c1 = forced[anchor] if anchor in comp.side1 else other_colour(pair, forced[anchor])
            c2 = other_colour(pair, c1)
            for v in comp.side1:
                if not seed(v, c1, "component"):
                    return result
            for v in comp.side2:
                if not seed(v, c2, "component"):
                    return result

    masks = {c: 0 for c in COLOURS}
    for v, c in forced.items():
        masks[c] |= 1 << v
    for i in range(start, end + 1):
        for v in ordering.layers[i]:
            c = forced.get(v)
            if c is None:
                continue
            clash = g.adj[v] & masks[c]
            if clash:
                u = lowest_bit(clash)
                result.conflict = Conflict(
                    "adjacent-equal", (min(u, v), max(u, v)), i, (c,)
                )
                return result
    return result


def almost_adjacent(g: Graph, ordering: MultiChainOrdering, u: int, v: int) -> bool:
    """True iff u (one layer below v) is adjacent to some vertex on v's own
    side of v's layer component; direct adjacency is the special case where
    that vertex is v itself."""
    if ordering.layer_of[v] != ordering.layer_of[u] + 1:
        raise InputError("almost-adjacency relates vertices of consecutive layers")
    comp = ordering.component_of(v)
    return bool(g.adj[u] & comp.side_of(v))


@dataclass(frozen=True)
class FailureInfo:
    kind: str  # "conflict" | "vertex-clash" | "component-clash"
    layer: int
    vertex: int | None = None
    witness: int | None = None
    conflict: Conflict | None = None


@dataclass
class ConservativeResult:
    success: bool
    colouring: dict[int, int]
    blame: dict[int, int]
    forced: dict[int, int]
    failure: FailureInfo | None = None


def layer_pair_split(q: dict[int, Pair], i: int) -> tuple[int, int]:
    """(not_below, with_below) for layer i.

    Normally not_below is the colour of q[i] absent from q[i+1].  When q has
    no entry above (truncated runs, or the last layer) the colour absent from
    q[i-1] stands in; with neither neighbour defined the smaller colour of the
    pair is used.
    """
    pair = q[i]
    if i + 1 in q:
        nb = diff_colour(pair, q[i + 1])
    elif i - 1 in q:
        nb = diff_colour(pair, q[i - 1])
    else:
        nb = pair[0]
    return nb, other_colour(pair, nb)


def conservative_colouring(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    q: dict[int, Pair],
    start: int,
    end: int,
) -> ConservativeResult:
    """Greedy layer sweep under assignment q, restricted to layers [start, end].

    Forced colours are applied up front across the whole range (so sweeps see
    forced vertices of later layers), then layers are processed in order.
    Components of two or more vertices are coloured as a unit: a side with an
    already-coloured not_below neighbour is pushed to with_below, otherwise
    the side whose next-layer neighbourhood is strictly smaller takes
    with_below.  Remaining vertices take not_below unless a neighbour already
    carries it.  ``blame`` records, for every vertex pushed to with_below, the
    coloured not_below (almost-)neighbour that caused it.
    """
    if start > end:
        return ConservativeResult(True, {}, {}, {})
    if not 0 <= start and end <= ordering.k:
        raise InputError("layer range out of bounds")
    for i in range(start, end + 1):
        if q.get(i) not in PAIRS:
            raise InputError(f"assignment missing layer {i}")

    qp = compute_quasi_precolouring(g, ordering, lists, q, start, end)
    if qp.conflict is not None:
        return ConservativeResult(
            False,
            {},
            {},
            qp.forced,
            FailureInfo("conflict", qp.conflict.layer, conflict=qp.conflict),
        )

    colouring: dict[int, int] = {}
    blame: dict[int, int] = {}
    masks = {c: 0 for c in COLOURS}

    def paint(v: int, c: int) -> None:
        colouring[v] = c
        masks[c] |= 1 << v

    for v, c in qp.forced.items():
        paint(v, c)

    def fail(kind: str, layer: int, vertex: int, witness: int) -> ConservativeResult:
        return ConservativeResult(
            False,
            colouring,
            blame,
            qp.forced,
            FailureInfo(kind, layer, vertex=vertex, witness=witness),
        )

    for i in range(start, end + 1):
        not_below, with_below = layer_pair_split(q, i)
        next_mask = ordering.layer_masks[i + 1] if i < ordering.k else 0
        singles = []
        for comp in ordering.components(i):
            if comp.size == 1:
                singles.append(comp.side1[0])
                continue
            if comp.side1[0] in colouring:
                continue  # a forced member forces the whole component
            nb_wit1 = comp.nbhd1 & masks[not_below]
            nb_wit2 = comp.nbhd2 & masks[not_below]
            # a side with an already-coloured neighbour of colour c cannot take c
            plain_ok = not nb_wit1 and not comp.nbhd2 & masks[with_below]
            swapped_ok = not nb_wit2 and not comp.nbhd1 & masks[with_below]
            if plain_ok and swapped_ok:
                nb1 = _max_side_neighbourhood(g, comp.side1, next_mask)
                nb2 = _max_side_neighbourhood(g, comp.side2, next_mask)
                if nb1 != nb2 and not nb1 & ~nb2:
                    c1, c2 = with_below, not_below
                else:
                    c1, c2 = not_below, with_below
            elif plain_ok:
                c1, c2 = not_below, with_below
                if nb_wit2:
                    for x in comp.side2:
                        blame[x] = lowest_bit(nb_wit2)
            elif swapped_ok:
                c1, c2 = with_below, not_below
                if nb_wit1:
                    for x in comp.side1:
                        blame[x] = lowest_bit(nb_wit1)
            else:
                # dead end; colour by the plain priority so the reported clash
                # is deterministic, then fail on the first clashing pair
                if nb_wit1:
                    c1, c2 = with_below, not_below
                    for x in comp.side1:
                        blame[x] = lowest_bit(nb_wit1)
                else:
                    c1, c2 = not_below, with_below
                    if nb_wit2:
                        for x in comp.side2:
                            blame[x] = lowest_bit(nb_wit2)
                for x in comp.side1:
                    paint(x, c1)
                for x in comp.side2:
                    paint(x, c2)
                if comp.nbhd1 & masks[c1]:
                    x, w = _clash_pair(g, comp.side1, masks[c1])
                else:
                    x, w = _clash_pair(g, comp.side2, masks[c2])
                return fail("component-clash", i, x, w)
            for x in comp.side1:
                paint(x, c1)
            for x in comp.side2:
                paint(x, c2)
        for v in sorted(singles):
            if v in colouring:
                continue
            hit = g.adj[v] & masks[not_below]
            if hit:
                paint(v, with_below)
                blame[v] = lowest_bit(hit)
                second = g.adj[v] & masks[with_below] & ~(1 << v)
                if second:
                    return fail("vertex-clash", i, v, lowest_bit(second))
            else:
                paint(v, not_below)
    return ConservativeResult(True, colouring, blame, qp.forced)


def _max_side_neighbourhood(g: Graph, side: tuple[int, ...], target: int) -> int:
    best = 0
    size = -1
    for v in side:
        nb = g.adj[v] & target
        if nb.bit_count() > size:
            best, size = nb, nb.bit_count()
    return best


def _clash_pair(g: Graph, side: tuple[int, ...], colour_mask: int) -> tuple[int, int]:
    for x in side:
        hit = g.adj[x] & colour_mask
        if hit:
            return x, lowest_bit(hit)
    raise AssertionError("clash mask nonempty but no member clashes")
