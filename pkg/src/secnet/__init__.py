"""Secure message rates over erasure networks with a passive eavesdropper."""

from .formulations import (
    EdgeRates,
    FormulationConfig,
    SchemeSolution,
    build,
    build_algo1,
    build_algo2,
    build_algo3,
    build_algo4,
    build_algo5,
    build_snc_baseline,
    extract_scheme,
    solve_rate,
    solve_scheme,
)
from .lpsolve import LinearProgram, LpSolution, Tolerances, check_feasibility, solve
from .netmodel import (
    EdgeChannel,
    Network,
    Path,
    edge_partial_order,
    enumerate_source_rooted_paths,
    max_flow,
    parse_network,
    serialize_network,
    topological_order,
)
from .oracles import LineParams, ParallelPairParams, line_bound, parallel_pair_bound

__all__ = [
    "EdgeChannel",
    "EdgeRates",
    "FormulationConfig",
    "LineParams",
    "LinearProgram",
    "LpSolution",
    "Network",
    "ParallelPairParams",
    "Path",
    "SchemeSolution",
    "Tolerances",
    "build",
    "build_algo1",
    "build_algo2",
    "build_algo3",
    "build_algo4",
    "build_algo5",
    "build_snc_baseline",
    "check_feasibility",
    "edge_partial_order",
    "enumerate_source_rooted_paths",
    "extract_scheme",
    "line_bound",
    "max_flow",
    "parallel_pair_bound",
    "parse_network",
    "serialize_network",
    "solve",
    "solve_rate",
    "solve_scheme",
    "topological_order",
]
