"""Exact solver and verification suite for the domination game on small graphs."""

__version__ = "0.1.0"

from .graphs import (
    MAX_VERTICES,
    CapacityError,
    Graph,
    Graph6Error,
    PartialState,
    PathComponent,
    PathKind,
    VertexSet,
    build_path,
    build_path_component,
    build_spider,
    cut_edge,
    disjoint_union,
    emit_graph6,
    parse_graph6,
)
from .lemmas import (
    Classification,
    LemmaBatch,
    LemmaVerdict,
    check_continuation,
    check_cutting_lemma,
    check_extended_cutting,
    check_no_minus,
    check_pass_lemma,
    check_predominated_cut,
    check_union_lemma,
    classify,
    run_lemma_batch,
    weight,
)
from .solver import (
    GameConfig,
    GameSolver,
    PassEntitlement,
    SolverPool,
    Turn,
    closed_form_path_value,
    gamma_g,
    gamma_g_dp,
    gamma_g_dp_prime,
    gamma_g_prime,
    gamma_g_sp,
    gamma_g_sp_prime,
    optimal_move,
    solve,
)
from .trees import (
    CriticalityReport,
    ScanResult,
    SpiderVerdict,
    analyze,
    enumerate_free_trees,
    scan_critical_trees,
    verify_spider,
)

__all__ = [
    "MAX_VERTICES",
    "CapacityError",
    "Classification",
    "CriticalityReport",
    "GameConfig",
    "GameSolver",
    "Graph",
    "Graph6Error",
    "LemmaBatch",
    "LemmaVerdict",
    "PartialState",
    "PassEntitlement",
    "PathComponent",
    "PathKind",
    "ScanResult",
    "SolverPool",
    "SpiderVerdict",
    "Turn",
    "VertexSet",
    "analyze",
    "build_path",
    "build_path_component",
    "build_spider",
    "check_continuation",
    "check_cutting_lemma",
    "check_extended_cutting",
    "check_no_minus",
    "check_pass_lemma",
    "check_predominated_cut",
    "check_union_lemma",
    "classify",
    "closed_form_path_value",
    "cut_edge",
    "disjoint_union",
    "emit_graph6",
    "enumerate_free_trees",
    "gamma_g",
    "gamma_g_dp",
    "gamma_g_dp_prime",
    "gamma_g_prime",
    "gamma_g_sp",
    "gamma_g_sp_prime",
    "optimal_move",
    "parse_graph6",
    "run_lemma_batch",
    "scan_critical_trees",
    "solve",
    "verify_spider",
    "weight",
    "__version__",
]
