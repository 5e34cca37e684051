"""Top-level pipeline: instance in, colouring or infeasibility witness out.

Pipeline: build and validate the layering, gate on empty lists and
non-bipartite layers, build the allowable array, extract an assignment, repair
it until witness-free, then run the greedy sweep.  With a nonempty array the
final sweep must succeed; its failure is an internal invariant violation.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .allowable import generate_allowable_array, has_empty_entry, render_array
from .assignment import eliminate_all_chains, extract_assignment
from .colouring import Pair, conservative_colouring
from .errors import (
    AssignmentsExhaustedError,
    InputError,
    InternalInvariantError,
    OddCycleError,
)
from .graph import (
    COLOURS,
    Graph,
    connected_components,
    graph_from_edges,
    graph_from_permutation,
    validate_proper_list_colouring,
)
from .ordering import MultiChainOrdering, build_multichain_ordering, choose_root


@dataclass(frozen=True)
class Instance:
    """A connected graph (from a permutation, or edges plus a root) with
    per-vertex colour lists over {1, 2, 3}."""

    graph: Graph
    root: int
    lists: tuple[frozenset[int], ...]
    perm: tuple[int, ...] | None = None

    @classmethod
    def from_permutation(cls, perm: Sequence[int], lists) -> "Instance":
        g = graph_from_permutation(perm)
        inst = cls(g, choose_root(perm), tuple(lists), tuple(perm))
        inst._check_lists()
        return inst

    @classmethod
    def from_graph(cls, g: Graph, root: int, lists) -> "Instance":
        inst = cls(g, root, tuple(lists))
        inst._check_lists()
        return inst

    def _check_lists(self) -> None:
        if len(self.lists) != self.graph.n:
            raise InputError("need one colour list per vertex")
        for v, cs in enumerate(self.lists):
            if not cs <= frozenset(COLOURS):
                raise InputError(f"list of vertex {v} uses colours outside 1..3")


@dataclass(frozen=True)
class Witness:
    """Why an instance is infeasible.

    kind "empty-list": ``vertex`` has no colours at all; "odd-cycle-layer":
    layer ``index`` induces an odd cycle, yet some vertex below is adjacent to
    the whole layer, so three colours would be needed in it; "empty-boundary":
    every pair assignment at boundary ``index`` was pruned; "no-assignment":
    every assignment obeying the array contains a segment certified
    uncolourable during repair.
    """

    kind: str
    index: int | None = None
    vertex: int | None = None
    component: int | None = None

    def describe(self) -> str:
        parts = []
        if self.component is not None:
            parts.append(f"component {self.component}")
        if self.kind == "empty-list":
            parts.append(f"list {self.vertex}")
        elif self.kind == "odd-cycle-layer":
            parts.append(f"layer {self.index}")
        elif self.kind == "no-assignment":
            parts.append("assignments")
        else:
            parts.append(f"boundary {self.index}")
        return " ".join(parts)


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    colouring: dict[int, int] | None = None
    witness: Witness | None = None


@dataclass
class Trace:
    events: list[str] = field(default_factory=list)
    layers: tuple[tuple[int, ...], ...] | None = None
    array_dump: str | None = None
    initial_assignment: dict[int, Pair] | None = None
    repairs: list[tuple[int, dict[int, Pair]]] = field(default_factory=list)

    def note(self, text: str) -> None:
        self.events.append(text)


def build_ordering(inst: Instance) -> MultiChainOrdering:
    return build_multichain_ordering(inst.graph, inst.root)


def solve(inst: Instance) -> Verdict:
    return _solve(inst, None)


def solve_with_trace(inst: Instance) -> tuple[Verdict, Trace]:
    trace = Trace()
    return _solve(inst, trace), trace


def _solve(inst: Instance, trace: Trace | None) -> Verdict:
    g, lists = inst.graph, inst.lists
    for v in range(g.n):
        if not lists[v]:
            if trace:
                trace.note(f"vertex {v} has an empty list")
            return Verdict(False, witness=Witness("empty-list", vertex=v))

    if g.n == 1:
        c = min(lists[0])
        if trace:
            trace.note(f"single vertex coloured {c} directly")
        return Verdict(True, colouring={0: c})

    ordering = build_ordering(inst)
    if trace:
        trace.layers = ordering.layers
        trace.note(f"layering with {ordering.k + 1} layers rooted at {ordering.root}")

    try:
        for i in range(ordering.k + 1):
            ordering.components(i)
    except OddCycleError as err:
        if trace:
            trace.note(f"layer {err.layer_index} induces an odd cycle")
        return Verdict(False, witness=Witness("odd-cycle-layer", index=err.layer_index))

    array = generate_allowable_array(g, ordering, lists)
    if trace:
        trace.array_dump = render_array(array)
    empty = has_empty_entry(array)
    if empty is not None:
        if trace:
            trace.note(f"boundary {empty} has no allowable pair")
        return Verdict(False, witness=Witness("empty-boundary", index=empty))

    q = extract_assignment(array, g, ordering, lists)
    if trace:
        trace.initial_assignment = dict(q)
        trace.note(f"initial assignment {_fmt_q(q)}")

    def on_repair(kind, top, new_q):
        if trace:
            trace.repairs.append((kind, top, dict(new_q)))
            trace.note(f"{kind} at layer {top}: {_fmt_q(new_q)}")

    try:
        q = eliminate_all_chains(g, ordering, lists, array, q, on_repair=on_repair)
    except AssignmentsExhaustedError:
        if trace:
            trace.note("all obeying assignments certified uncolourable")
        return Verdict(False, witness=Witness("no-assignment"))
    if trace:
        trace.note(f"{len(trace.repairs)} repair iterations")

    result = conservative_colouring(g, ordering, lists, q, 0, ordering.k)
    if not result.success:
        raise InternalInvariantError(
            "greedy sweep failed on a repaired assignment over a nonempty array"
        )
    if not validate_proper_list_colouring(g, lists, result.colouring):
        raise InternalInvariantError("sweep output is not a proper list colouring")
    return Verdict(True, colouring=dict(result.colouring))


def _fmt_q(q: dict[int, Pair]) -> str:
    return " ".join(f"{i}:{p[0]}{p[1]}" for i, p in sorted(q.items()))


def solve_components(g: Graph, lists: Sequence[frozenset[int]]) -> Verdict:
    """Solve a possibly disconnected graph componentwise.

    Each component is solved from its own highest-id vertex, which matches the
    permutation-mode root on any induced subgraph of an inversion graph.  The
    merged colouring is returned, or the first component's witness with the
    component recorded (indices inside the witness are component-local).
    """
    merged: dict[int, int] = {}
    for idx, comp in enumerate(connected_components(g)):
        back = {local: orig for local, orig in enumerate(comp)}
        fwd = {orig: local for local, orig in back.items()}
        edges = [
            (fwd[u], fwd[v])
            for u in comp
            for v in g.neighbours(u)
            if u < v and v in fwd
        ]
        sub = graph_from_edges(len(comp), edges) if len(comp) > 1 else Graph(1, (0,))
        sub_lists = tuple(lists[back[i]] for i in range(len(comp)))
        inst = Instance.from_graph(sub, len(comp) - 1, sub_lists)
        verdict = solve(inst)
        if not verdict.feasible:
            w = verdict.witness
            vertex = back[w.vertex] if w.vertex is not None else None
            return Verdict(
                False,
                witness=Witness(w.kind, index=w.index, vertex=vertex, component=idx),
            )
        merged.update({back[v]: c for v, c in verdict.colouring.items()})
    return Verdict(True, colouring=merged)
