"""Decision procedures and certificates for tree-shifts of finite type.

The package decides irreducibility and topological mixing of vertex
tree-shifts on d-ary trees, emits machine-checkable evidence for every
verdict, constructs periodic trees and dense-orbit prefixes, and estimates
topological entropy from exact block counts.
"""

from .words import (
    EPSILON,
    CompletePrefixSet,
    all_words,
    extract_cps,
    is_complete_prefix_set,
    is_prefix_set,
    words_up_to,
)
from .graphs import (
    LabeledGraph,
    SymbolicMatrix,
    TsftFormatError,
    VertexTsft,
    essentialize,
    format_language,
    format_tsft,
    is_essential,
    labeled_graph,
    parse_tsft,
    symbolic_adjacency,
    symbolic_mul,
    symbolic_power,
    to_dot,
    word_matrix,
)
from .blocks import (
    Block,
    BlockCount,
    ForbiddenTsft,
    HigherBlockTsft,
    VertexPresentation,
    all_blocks,
    allowed_blocks,
    block_is_allowed,
    enumerate_blocks,
    higher_block_tsft,
    parse_block,
    tree_distance,
    vertex_allows_block,
    vertex_from_forbidden,
)
from .deciders import (
    CapExceededError,
    EmptyShiftError,
    IrreducibilityReport,
    MixingReport,
    ZeroCycleWitness,
    brute_force_irreducible,
    commuting_2x2_shortcut,
    decide_irreducible,
    decide_mixing,
    irreducibility_bound,
    mixing_depth_bound,
    validate_mixing_witness,
    validate_pair_witness,
    validate_zero_cycle,
)
from .dynamics import (
    ChaosReport,
    EntropyEstimate,
    NotIrreducibleError,
    PeriodicTreeCertificate,
    TreePattern,
    build_periodic_tree,
    chaos_report,
    dense_orbit_prefix,
    entropy_estimate,
    verify_periodic,
)
from .reports import (
    chaos_to_json,
    irreducibility_to_json,
    mixing_to_json,
    tsft_from_json,
    tsft_to_json,
    verify_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
