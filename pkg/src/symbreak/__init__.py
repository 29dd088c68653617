"""Automorphism groups and symmetry-breaking edge colourings of small graphs."""

from .colouring import (
    EdgeColouring,
    breaks_all,
    coloured_isomorphic,
    find_almost_distinguishing_witness,
    preserves,
)
from .constructor import ConstructionTrace, TheoremFalsified, construct
from .graph import (
    Graph,
    bfs_distance,
    connected_components,
    degree_profile,
    induced_subgraph,
    parse_edge_list,
    parse_graph6,
    to_graph6,
)
from .harness import VerificationRecord, analyze_graph
from .solver import (
    EXCEEDS,
    INFINITE,
    IndexResult,
    distinguishing_index,
    find_breaking_colouring,
    find_distinguishing_or_almost,
    small_distinguishing_index,
)
from .symmetry import (
    AutGroup,
    automorphism_group,
    is_automorphism,
    is_small,
    setwise_stabilizer,
    small_automorphisms,
    vertex_orbits,
)

__version__ = "0.1.0"

__all__ = [
    "AutGroup",
    "ConstructionTrace",
    "EXCEEDS",
    "EdgeColouring",
    "Graph",
    "INFINITE",
    "IndexResult",
    "TheoremFalsified",
    "VerificationRecord",
    "analyze_graph",
    "automorphism_group",
    "bfs_distance",
    "breaks_all",
    "coloured_isomorphic",
    "connected_components",
    "construct",
    "degree_profile",
    "distinguishing_index",
    "find_almost_distinguishing_witness",
    "find_breaking_colouring",
    "find_distinguishing_or_almost",
    "induced_subgraph",
    "is_automorphism",
    "is_small",
    "parse_edge_list",
    "parse_graph6",
    "preserves",
    "setwise_stabilizer",
    "small_automorphisms",
    "small_distinguishing_index",
    "to_graph6",
    "vertex_orbits",
]
