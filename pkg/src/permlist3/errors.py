"""Exception types shared across the package."""

from __future__ import annotations


class PermList3Error(Exception):
    """Base class for all package-specific errors."""


class InputError(PermList3Error, ValueError):
    """A caller violated an operation's documented precondition."""


class MalformedPermutationError(InputError):
    """Sequence is not a permutation of 1..n."""


class DisconnectedGraphError(InputError):
    """Operation requires a connected graph."""

    def __init__(self, message: str, unreached: int | None = None):
        super().__init__(message)
        self.unreached = unreached


class NotMultiChainError(PermList3Error):
    """A BFS layering failed the per-layer neighbourhood-nesting check."""

    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class OddCycleError(PermList3Error):
    """A layer-induced subgraph is not bipartite.

    With a validated layering this means the instance admits no proper
    3-colour list colouring at all (some vertex in the layer below is
    adjacent to the whole layer), so callers translate this into an
    infeasibility verdict rather than a crash.
    """

    def __init__(self, message: str, layer_index: int, witness: tuple[int, int]):
        super().__init__(message)
        self.layer_index = layer_index
        self.witness = witness


class OracleCapError(InputError):
    """Brute-force oracle refused an instance above its size cap."""


class ParseError(InputError):
    """Instance or colouring file could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InternalInvariantError(PermList3Error):
    """A property the theory guarantees was observed to fail; surfaced loudly."""


class ChainExtractionError(InternalInvariantError):
    """A failed conservative run did not yield a reconstructible chain."""

    def __init__(self, message: str, conflict=None):
        super().__init__(message)
        self.conflict = conflict


class RepairError(InternalInvariantError):
    """Assignment repair could not make progress."""


class AssignmentsExhaustedError(PermList3Error):
    """Every assignment obeying the array contains a certified-uncolourable
    segment; together with array completeness this proves infeasibility."""
