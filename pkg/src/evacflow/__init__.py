"""Quickest evacuation on dynamic networks with uniform edge capacities.

The solver computes the least horizon by which all supply can reach a
single sink of small in-degree, then writes the supply as a convex
combination of polytope vertices whose per-order flows assemble into an
optimal dynamic flow. A time-expanded brute force provides independent
ground truth for every answer.
"""

from .errors import (
    ChainViolationError,
    EvacflowError,
    GridMismatchError,
    InstanceTooLargeError,
    NegativeCycleError,
    NoForwardIntersectionError,
    NonIntegralTransitError,
    StepMismatchError,
    UnreachableSupplyError,
    ValidationError,
)
from .grid import (
    AreaLabels,
    CandidateSet,
    GridSpec,
    candidate_tuples,
    classify_areas,
    count_candidates,
    gen_grid,
    grid_horizon,
    grid_solve,
    make_stage_filter,
)
from .horizon import (
    AdmittingEntry,
    AdmittingFamily,
    check_admits,
    enumerate_admitting_family,
    maximal_admitting_subset,
    min_time_horizon,
    origin_sequence,
)
from .instances import load_flow, load_instance, save_flow, save_instance
from .network import (
    Edge,
    Network,
    Path,
    StaticFlow,
    SupplyFunction,
    ValidationReport,
    require_valid,
    validate_network,
    validate_static_flow,
)
from .oracle import (
    TimeExpandedFlow,
    TimeExpandedNet,
    VerificationReport,
    build_time_expanded,
    default_step,
    oracle_feasible,
    oracle_max_outflow,
    oracle_t_star,
    verify_dynamic_flow,
)
from .polytope import (
    ConvexDecomposition,
    DecompositionTerm,
    OutflowCache,
    PolytopeVertex,
    assemble_quickest_flow,
    decompose_supply,
    lexmax_flow,
    supply_feasible_at,
    supply_vector,
    vertex_from_order,
)
from .rational import format_rational, json_rational, parse_rational, rational_gcd
from .sssp import (
    SsspResult,
    max_outflow,
    min_required_time,
    successive_shortest_paths,
)

__all__ = [
    "AdmittingEntry",
    "AdmittingFamily",
    "AreaLabels",
    "CandidateSet",
    "ChainViolationError",
    "ConvexDecomposition",
    "DecompositionTerm",
    "Edge",
    "EvacflowError",
    "GridMismatchError",
    "GridSpec",
    "InstanceTooLargeError",
    "NegativeCycleError",
    "Network",
    "NoForwardIntersectionError",
    "NonIntegralTransitError",
    "OutflowCache",
    "Path",
    "PolytopeVertex",
    "SsspResult",
    "StaticFlow",
    "StepMismatchError",
    "SupplyFunction",
    "TimeExpandedFlow",
    "TimeExpandedNet",
    "UnreachableSupplyError",
    "ValidationError",
    "ValidationReport",
    "VerificationReport",
    "assemble_quickest_flow",
    "build_time_expanded",
    "candidate_tuples",
    "check_admits",
    "classify_areas",
    "count_candidates",
    "decompose_supply",
    "default_step",
    "enumerate_admitting_family",
    "format_rational",
    "gen_grid",
    "grid_horizon",
    "grid_solve",
    "json_rational",
    "lexmax_flow",
    "load_flow",
    "load_instance",
    "make_stage_filter",
    "max_outflow",
    "maximal_admitting_subset",
    "min_required_time",
    "min_time_horizon",
    "oracle_feasible",
    "oracle_max_outflow",
    "oracle_t_star",
    "origin_sequence",
    "parse_rational",
    "rational_gcd",
    "require_valid",
    "save_flow",
    "save_instance",
    "successive_shortest_paths",
    "supply_feasible_at",
    "supply_vector",
    "validate_network",
    "validate_static_flow",
    "verify_dynamic_flow",
    "vertex_from_order",
]
