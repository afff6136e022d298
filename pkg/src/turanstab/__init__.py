"""Saturated graphs near the Turán threshold: constructions, decomposition, oracles."""

from .constructions import (
    AuxParams,
    FinalParams,
    ParameterError,
    build_aux,
    build_G_rs,
    build_H_rst,
    h_edge_lower_bound_holds,
    maximal_completion,
    tightness_params,
    verify_aux_properties,
)
from .formats import ParseError, decode_graph6, encode_graph6, parse_edgelist, read_graph, write_graph
from .graph import (
    CapExceeded,
    CliqueOverflow,
    Graph,
    GraphError,
    PartitionedGraph,
    covered_edge_count,
    enumerate_cliques,
    find_clique,
    greedy_clique_matching,
    has_clique,
    max_independent_set,
    r_partite_complement,
)
from .oracles import OracleReport, brute_g_r, brute_g_star, definition_level_saturation
from .randomized import RandomBuildParams, build_random, has_biclique
from .stability import (
    StabilityCertificate,
    averaging_subset,
    cover_saturating_pairs,
    cover_typed_pairs,
    peel_to_r_partite,
    stability_decompose,
    validate_certificate,
)
from .turan import (
    ContractViolation,
    classify_nonedge_types,
    is_complete_multipartite,
    is_r_partite,
    is_saturated,
    saturating_edges,
    turan_graph,
    turan_number,
    turan_shift_check,
)

__version__ = "0.1.0"
