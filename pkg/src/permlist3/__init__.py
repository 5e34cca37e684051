"""Exact 3-colour list colouring of permutation graphs.

The solver layers the graph by BFS from a root with nested per-layer
neighbourhoods, prunes per-boundary colour-pair assignments to a fixpoint,
extracts a two-colours-per-layer assignment, repairs it until the greedy layer
sweep succeeds, and emits either a colouring or an infeasibility witness.
A brute-force oracle, a seeded generator and a CLI round it out.
"""

from .allowable import (
    ALL_ALLOWABLE_PAIRS,
    AllowableArray,
    AllowablePair,
    fixed_pass,
    forces_quasi_bad,
    generate_allowable_array,
    has_empty_entry,
    init_full_array,
    render_array,
)
from .assignment import (
    QuasiBadChain,
    chain_segment,
    conflict_segment,
    chain_bullet_violation,
    eliminate_all_chains,
    extract_assignment,
    find_quasi_bad_chain,
    fix_quasi_bad_chain,
    is_adjustable,
    propagate_colour_change,
    swap_pair,
)
from .colouring import (
    PAIRS,
    Conflict,
    ConservativeResult,
    Pair,
    QuasiPrecolouring,
    almost_adjacent,
    compute_quasi_precolouring,
    conservative_colouring,
    diff_colour,
    full_lists,
    make_lists,
    other_colour,
    shared_colour,
    validate_good_assignment,
)
from .errors import (
    AssignmentsExhaustedError,
    ChainExtractionError,
    DisconnectedGraphError,
    InputError,
    InternalInvariantError,
    MalformedPermutationError,
    NotMultiChainError,
    OddCycleError,
    OracleCapError,
    ParseError,
    PermList3Error,
    RepairError,
)
from .graph import (
    COLOURS,
    BipartiteComponent,
    Graph,
    bipartite_components,
    connected_components,
    graph_from_edges,
    graph_from_permutation,
    is_connected,
    validate_permutation,
    validate_proper_list_colouring,
)
from .oracle import GenConfig, gen_instance, oracle_enumerate, oracle_solve
from .ordering import (
    MultiChainOrdering,
    bfs_layers,
    build_multichain_ordering,
    check_orientation_lemmas,
    choose_root,
    find_multichain_violation,
    is_multichain,
    max_neighbourhood_vertex,
)
from .solver import (
    Instance,
    Trace,
    Verdict,
    Witness,
    solve,
    solve_components,
    solve_with_trace,
)
