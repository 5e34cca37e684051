"""Extracting layer assignments from the array, chain detection and repair.

A failed greedy sweep is turned back into its witness: a sequence of vertices,
one per consecutive layer, pinned at both ends by forced vertices.  Repair
swaps the lowest swappable layer inside the witness span and rewrites the
assignment downward; the highest failing layer strictly decreases, which both
bounds the loop and is asserted.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .allowable import AllowableArray, TripleChecker, has_empty_entry
from .colouring import (
    Conflict,
    Pair,
    compute_quasi_precolouring,
    conservative_colouring,
    diff_colour,
    almost_adjacent,
    validate_good_assignment,
)
from .errors import (
    AssignmentsExhaustedError,
    ChainExtractionError,
    InputError,
    InternalInvariantError,
    RepairError,
)
from .graph import Graph
from .ordering import MultiChainOrdering

Segment = tuple[int, tuple[Pair, ...]]


@dataclass(frozen=True)
class QuasiBadChain:
    """Witness that no colouring can follow the assignment: one vertex per
    layer from layer_span[0] to layer_span[1], consecutive members adjacent or
    almost-adjacent, both endpoints forced with the colours recorded here."""

    vertices: tuple[int, ...]
    layer_span: tuple[int, int]
    endpoint_colours: tuple[int, int]


def extract_assignment(
    a: AllowableArray,
    g: Graph | None = None,
    ordering: MultiChainOrdering | None = None,
    lists: Sequence[frozenset[int]] | None = None,
    forbidden: Sequence[Segment] = (),
) -> dict[int, Pair]:
    """Lexicographically smallest assignment obeying the array.

    Given the instance as context, successor choices additionally skip pairs
    whose three-layer forced colouring would contradict itself; the fixpoint's
    compatibility pruning guarantees such a choice always remains, so without
    ``forbidden`` segments no backtracking happens.  ``forbidden`` excludes
    contiguous runs of layer pairs already certified uncolourable; the search
    then backtracks, and exhausting it raises AssignmentsExhaustedError, which
    certifies infeasibility (every colouring's own covering assignment obeys
    the array, is conflict-free, and avoids every certified segment).
    """
    empty = has_empty_entry(a)
    if empty is not None:
        raise InputError(f"array entry {empty} is empty; no assignment exists")
    triples = (
        TripleChecker(g, ordering, lists)
        if g is not None and ordering is not None and lists is not None
        else None
    )
    k = a.k

    def blocked(q: dict[int, Pair], j: int) -> bool:
        for start, pairs in forbidden:
            end = start + len(pairs) - 1
            if end != j or start < 0:
                continue
            if all(q[start + t] == pairs[t] for t in range(len(pairs))):
                return True
        return False

    budget = 200_000
    q: dict[int, Pair] = {}

    def rec(j: int) -> bool:
        nonlocal budget
        budget -= 1
        if budget < 0:
            raise InternalInvariantError("assignment search exceeded its node budget")
        if j > k:
            return True
        if j == 0:
            options = sorted({p[0] for p in a.entries[0]})
        else:
            options = sorted(p[1] for p in a.entries[j - 1] if p[0] == q[j - 1])
        for pair in options:
            if j >= 2 and triples is not None and not triples.conflict_free(
                j - 2, {j - 2: q[j - 2], j - 1: q[j - 1], j: pair}
            ):
                continue
            q[j] = pair
            if not blocked(q, j) and rec(j + 1):
                return True
            del q[j]
        return False

    if not rec(0):
        raise AssignmentsExhaustedError(
            "no assignment obeying the array avoids the certified segments"
        )
    return dict(q)


def propagate_colour_change(
    a: AllowableArray,
    q: dict[int, Pair],
    i: int,
    new_pair: Pair,
    direction: str,
) -> dict[int, Pair]:
    """Set layer i to new_pair and rewrite consecutive layers in one direction,
    taking the smallest array-consistent pair each step and stopping as soon
    as the untouched remainder is consistent again."""
    if direction not in ("down", "up"):
        raise InputError("direction must be 'down' or 'up'")
    k = a.k  # layers run 0..k, boundaries 0..k-1
    if not 0 <= i <= k:
        raise InputError(f"layer {i} out of range")
    if direction == "down" and i < k and (new_pair, q[i + 1]) not in a.entries[i]:
        raise InputError(f"{new_pair} at layer {i} is not allowable under layer {i + 1}")
    if direction == "up" and i > 0 and (q[i - 1], new_pair) not in a.entries[i - 1]:
        raise InputError(f"{new_pair} at layer {i} is not allowable over layer {i - 1}")
    out = dict(q)
    out[i] = new_pair
    if direction == "down":
        for j in range(i - 1, -1, -1):
            if (out[j], out[j + 1]) in a.entries[j]:
                break
            lowers = [p[0] for p in a.entries[j] if p[1] == out[j + 1]]
            if not lowers:
                raise InternalInvariantError(f"no predecessor for {out[j + 1]} at boundary {j}")
            out[j] = min(lowers)
    else:
        for j in range(i + 1, k + 1):
            uppers = [p[1] for p in a.entries[j - 1] if p[0] == out[j - 1]]
            if not uppers:
                raise InternalInvariantError(f"no successor for {out[j - 1]} at boundary {j - 1}")
            out[j] = min(uppers)
            if j < k and (out[j], out[j + 1]) in a.entries[j]:
                break
    return out


def find_quasi_bad_chain(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    q: dict[int, Pair],
) -> QuasiBadChain | None:
    """Run the full greedy sweep; on failure walk blame links back to the
    forced blocker below and attach the forced clash witness above.

    Raises ChainExtractionError when the failure carries no chain: a
    contradictory forced colouring (two forcing rules colliding), or a clash
    whose witness sits below the failing layer.  Both shapes certify that no
    colouring can follow q but fall outside the chain format.
    """
    validate_good_assignment(ordering, lists, q)
    result = conservative_colouring(g, ordering, lists, q, 0, ordering.k)
    if result.success:
        return None
    f = result.failure
    if f.kind == "conflict":
        raise ChainExtractionError(
            f"forced colouring is self-contradictory at layer {f.layer}: {f.conflict}",
            conflict=f.conflict,
        )
    x, w = f.vertex, f.witness
    if ordering.layer_of[w] != f.layer + 1:
        raise ChainExtractionError(
            f"clash witness {w} of vertex {x} lies below the failing layer {f.layer}"
        )
    if w not in result.forced:
        raise ChainExtractionError(f"upper clash witness {w} is not a forced vertex")
    chain = [x, w]
    cur = x
    while True:
        u = result.blame.get(cur)
        if u is None:
            raise ChainExtractionError(
                f"vertex {cur} carries the shared colour without a recorded cause"
            )
        chain.insert(0, u)
        if u in result.forced:
            break
        cur = u
    h = ordering.layer_of[chain[0]]
    l = ordering.layer_of[chain[-1]]
    if [ordering.layer_of[v] for v in chain] != list(range(h, l + 1)):
        raise ChainExtractionError("blame walk did not step one layer at a time")
    _assert_interior_pattern(q, h, l)
    return QuasiBadChain(
        tuple(chain), (h, l), (result.forced[chain[0]], result.forced[chain[-1]])
    )


def _assert_interior_pattern(q: dict[int, Pair], h: int, l: int) -> None:
    """Chain interiors never see one colour three layers running, nor equal
    adjacent pairs; a violation would unsound the repair step."""
    for m in range(h, l):
        if q[m] == q[m + 1]:
            raise InternalInvariantError(f"equal pairs on chain layers {m}, {m + 1}")
    for m in range(h, l - 1):
        if set(q[m]) & set(q[m + 1]) & set(q[m + 2]):
            raise InternalInvariantError(
                f"one colour spans chain layers {m}..{m + 2}"
            )


def swap_pair(p: Pair, nxt: Pair) -> Pair:
    """The third pair: the colour only in p together with the colour only in nxt."""
    a, b = diff_colour(p, nxt), diff_colour(nxt, p)
    return (a, b) if a < b else (b, a)


def is_adjustable(a: AllowableArray, q: dict[int, Pair], i: int) -> bool:
    """Layer i can swap to the third pair while keeping its upper boundary allowable."""
    if not 0 <= i < a.k:
        return False
    return (swap_pair(q[i], q[i + 1]), q[i + 1]) in a.entries[i]


def fix_quasi_bad_chain(
    a: AllowableArray, q: dict[int, Pair], chain: QuasiBadChain
) -> dict[int, Pair]:
    """Swap the lowest adjustable layer in [h, l-2] to the pair two layers up
    and rewrite downward; layers above stay untouched."""
    h, l = chain.layer_span
    for i in range(h, l - 1):
        if is_adjustable(a, q, i):
            new_pair = swap_pair(q[i], q[i + 1])
            if i + 2 <= l and new_pair != q[i + 2]:
                raise InternalInvariantError(
                    f"swap at layer {i} is {new_pair}, expected the pair of layer {i + 2}"
                )
            return propagate_colour_change(a, q, i, new_pair, "down")
    raise RepairError(
        f"no adjustable layer in chain span [{h}, {l - 2}]; the array should have pruned this"
    )


def chain_segment(ordering: MultiChainOrdering, q: dict[int, Pair], chain: QuasiBadChain) -> Segment:
    """The contiguous run of layer pairs that certifies the chain.

    Every forcing rule behind the chain's endpoints reads the pairs of the
    chain's layers and their immediate neighbours, so any assignment agreeing
    with q on [h-1, l+1] carries the same chain and admits no colouring.
    """
    h, l = chain.layer_span
    a, b = max(0, h - 1), min(ordering.k, l + 1)
    return (a, tuple(q[j] for j in range(a, b + 1)))


def conflict_segment(ordering: MultiChainOrdering, q: dict[int, Pair], conflict: Conflict) -> Segment:
    """The run of layer pairs reproducing a forced-colouring contradiction.

    Forcings at layer i read at most the pairs of layers i-1..i+1; a clash
    across an edge into layer i+1 additionally reads layer i+2.
    """
    i = conflict.layer
    hi = i + 2 if conflict.kind == "adjacent-equal" else i + 1
    a, b = max(0, i - 1), min(ordering.k, hi)
    return (a, tuple(q[j] for j in range(a, b + 1)))


RepairHook = Callable[[str, int, dict[int, Pair]], None]


def eliminate_all_chains(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    a: AllowableArray,
    q: dict[int, Pair],
    on_repair: RepairHook | None = None,
) -> dict[int, Pair]:
    """Find-and-fix until the greedy sweep is witness-free.

    Chains are repaired by the lowest-adjustable-layer swap, under which the
    highest failing layer strictly decreases (asserted).  When the swap is
    unavailable, or the failure is a forced-colouring contradiction rather
    than a chain, the failure's certified segment is recorded and a fresh
    assignment avoiding every recorded segment is extracted.  Exhausting the
    assignments proves infeasibility; 6k loop iterations is a hard cap that
    turns any divergence from the theory into a loud error.
    """
    if has_empty_entry(a) is not None:
        raise InputError("array has an empty entry; gate on feasibility first")
    q = dict(q)
    bound = 6 * max(a.k, 1)
    prev_top = None
    forbidden: list[Segment] = []

    def reassign(segment: Segment, top: int) -> dict[int, Pair]:
        nonlocal prev_top
        if segment not in forbidden:
            forbidden.append(segment)
        new_q = extract_assignment(a, g, ordering, lists, forbidden)
        prev_top = None
        if on_repair is not None:
            on_repair("reassign", top, dict(new_q))
        return new_q

    for _ in range(bound + 1):
        try:
            chain = find_quasi_bad_chain(g, ordering, lists, q)
        except ChainExtractionError as err:
            if err.conflict is not None:
                segment = conflict_segment(ordering, q, err.conflict)
                top = err.conflict.layer + 1
            else:
                # a failed sweep without a reconstructible chain still proves
                # this exact assignment admits no colouring
                segment = (0, tuple(q[j] for j in range(ordering.k + 1)))
                top = ordering.k
            q = reassign(segment, top)
            continue
        if chain is None:
            return q
        top = chain.layer_span[1]
        segment = chain_segment(ordering, q, chain)
        if segment not in forbidden:
            forbidden.append(segment)
        if any(is_adjustable(a, q, i) for i in range(chain.layer_span[0], top - 1)):
            if prev_top is not None and top >= prev_top:
                raise RepairError(f"failing layer did not decrease: {prev_top} then {top}")
            prev_top = top
            q = fix_quasi_bad_chain(a, q, chain)
            if on_repair is not None:
                on_repair("chain-fix", top, dict(q))
        else:
            q = reassign(segment, top)
    raise RepairError(f"repair loop exceeded the {bound}-iteration safety bound")


def chain_bullet_violation(
    g: Graph,
    ordering: MultiChainOrdering,
    lists: Sequence[frozenset[int]],
    q: dict[int, Pair],
    chain: QuasiBadChain,
) -> str | None:
    """Declarative check of the five chain conditions, independent of the
    blame-walk construction; returns a description of the first violation."""
    vs = chain.vertices
    h, l = chain.layer_span
    if l - h < 2 or len(vs) != l - h + 1:
        return "span must cover at least three layers with one vertex each"
    if [ordering.layer_of[v] for v in vs] != list(range(h, l + 1)):
        return "vertices must occupy consecutive layers in order"
    for u, v in zip(vs, vs[1:]):
        if not g.has_edge(u, v) and not almost_adjacent(g, ordering, u, v):
            return f"{u} and {v} are neither adjacent nor almost-adjacent"
    for m in range(h + 1, l):
        cx = set(q[m]) & set(q[m - 1])
        cy = set(q[m]) & set(q[m + 1])
        if not (len(cx) == 1 and len(cy) == 1 and cx != cy):
            return f"interior layer {m} does not split its pair across its neighbours"
    qp = compute_quasi_precolouring(g, ordering, lists, q, 0, ordering.k)
    if qp.conflict is not None:
        return "forced colouring is contradictory; chain conditions are undefined"
    need_h = diff_colour(q[h + 1], q[h + 2])
    if qp.forced.get(vs[0]) != need_h:
        return f"lower endpoint must be forced {need_h}"
    need_l = diff_colour(q[l - 1], q[l - 2])
    if qp.forced.get(vs[-1]) != need_l:
        return f"upper endpoint must be forced {need_l}"
    return None
