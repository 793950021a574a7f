"""Block trees, anchored-graph operations, magic unitaries and a quantum-isomorphism sieve."""
from ._accel import BACKEND
from .anchored import (
    AnchoredGraph,
    delta1,
    delta2,
    gamma,
    reconstruct_tree,
    rho,
    rooted_block_tree,
    split,
    validate_anchored,
    zbar,
)
from .blocks import (
    Anchor,
    AnchorKind,
    BlockDecomposition,
    block_decomposition,
    block_forest,
    block_graph,
    block_tree,
    is_2connected,
    is_block_graph,
    lambda_anchor,
)
from .graph import (
    INFINITY,
    Graph,
    VertexId,
    adjacency_matrix,
    center,
    char_poly,
    connected_components,
    disjoint_union,
    distance_matrix,
    eccentricity,
    induced_subgraph,
    walk_count_tensor,
)
from .magic import (
    MagicUnitary,
    adjoint_mu,
    c4_mu,
    extract_block,
    from_permutation,
    fulton_compatible,
    gamma_transport,
    is_quantum_iso,
    partition_sum,
    preserves_anchor,
    preserves_partition,
    validate_mu,
)
from .sieve import Verdict, block_tree_witness, classical_iso, qi_sieve, signature, tree_canonical
from .walks import verify_walk_formula, walk_profile, walks, walks_through, walks_through_once

__version__ = "0.1.0"
