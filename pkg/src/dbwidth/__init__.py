"""Directed branch-width toolkit: exact and heuristic layouts, transformations, solvers and checks."""

from __future__ import annotations

from .core import (
    DiGraph,
    Labeling,
    UGraph,
    bicut_value,
    bidirected_separator,
    build_digraph,
    build_ugraph,
    directed_line_graph,
    edge_separator,
    is_consistent,
    labeling_from_separator,
    sources_and_sinks,
    underlying,
    vertex_separator,
)
from .errors import (
    DbwError,
    GraphError,
    GroundMismatchError,
    GroundTooLargeError,
    InvalidEdgeError,
    NotIdentifiableError,
    ParallelEdgeError,
    ParallelEdgesUnsupportedError,
    ParseError,
    SelfLoopError,
    TooLargeError,
    UnknownCheckError,
)
from .gf2 import Gf2Matrix, gf2_rank
from .layout import (
    CutFunction,
    LayoutTree,
    WidthReport,
    bi_cut_rank_width,
    bicut_cut,
    branch_width,
    dbw_cut,
    directed_branch_width,
    enumerate_width,
    exact_width,
    heuristic_width,
    layout_width,
    ubw_cut,
)
from .solvers import (
    DredInstance,
    brute_force_dred,
    brute_force_max_cut,
    clique_to_dred,
    d_hamilton_path,
    d_max_cut,
    dag_cop_sweep,
    decide_dbw,
    held_karp_hamilton,
    reach2,
)
from .transforms import (
    contract_edge,
    delete_edges,
    delete_vertices,
    identify_source_sink,
    is_butterfly_edge,
    is_two_contractible,
    source_sink_split,
)
from .treedec import TreeDecomposition, branch_to_tree_decomposition, validate_tree_decomposition

__version__ = "0.1.0"
