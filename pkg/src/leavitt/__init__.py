"""Decide ring properties of Leavitt path algebras from their graphs, with an
exact symbolic algebra and matrix decompositions to check the answers."""
from .algebra import AlgebraElement, LeavittPathAlgebra, algebra_of, dim_over_K, nilpotency_index, normal_form
from .decision import (
    Verdict,
    cross_check_via_ideals,
    decide_bounded_index,
    decide_directly_finite,
    decide_sigma_v,
    decide_von_neumann_regular,
    full_report,
)
from .errors import CapExceeded, GraphError, LeavittError, ParseError, UnsupportedGraph
from .graph import OMEGA, Graph, cycles, path_stats, satisfies_condition_K, simple_paths_ending_at
from .ideals import (
    all_hereditary_saturated_sets,
    classify_quotient,
    graded_prime_ideals,
    hereditary_saturated_closure,
    maximal_tails,
    quotient_graph,
)
from .parsing import emit_graph, evaluate, parse_expr, parse_graph
from .structure import decompose, represent

__all__ = [
    "AlgebraElement", "LeavittPathAlgebra", "algebra_of", "dim_over_K", "nilpotency_index", "normal_form",
    "Verdict", "cross_check_via_ideals", "decide_bounded_index", "decide_directly_finite", "decide_sigma_v",
    "decide_von_neumann_regular", "full_report",
    "CapExceeded", "GraphError", "LeavittError", "ParseError", "UnsupportedGraph",
    "OMEGA", "Graph", "cycles", "path_stats", "satisfies_condition_K", "simple_paths_ending_at",
    "all_hereditary_saturated_sets", "classify_quotient", "graded_prime_ideals", "hereditary_saturated_closure",
    "maximal_tails", "quotient_graph",
    "emit_graph", "evaluate", "parse_expr", "parse_graph",
    "decompose", "represent",
]
