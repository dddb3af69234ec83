"""Selfish routing on ring networks with exact worst-case analysis.

Agents route one unit each between two ring nodes, clockwise or
counterclockwise, over links with polynomial latency in the load. The
package computes equilibria, exact optimal routings, and their cost
ratio with rational arithmetic, classifies equilibria against a
least-switching optimum, checks the family of ratio bounds that
classification supports, and numerically certifies the constrained
minimization behind the covering-case bound.
"""

from .analysis import (
    BoundCheck,
    Classification,
    InstanceAnalysis,
    SplitProfile,
    analyze_instance,
    check_all_bounds,
    classify,
    pairwise_intersection_check,
    profile,
    singular_reduction,
    split_links,
)
from .equilibria import (
    DeviationWitness,
    NashCheck,
    best_response,
    best_response_trajectory,
    enumerate_nash,
    is_nash,
    potential,
    worst_nash,
)
from .model import (
    CCW,
    CW,
    DEFAULT_ENUM_LIMIT,
    DegenerateOptimum,
    InstanceTooLarge,
    RingInstance,
    Routing,
    agent_latency,
    agent_paths,
    dump_instance,
    ensure_valid,
    format_ratio,
    instance_from_dict,
    instance_to_dict,
    iter_routings,
    latency,
    load_instance,
    loads,
    max_latency,
    norm_a,
    norm_b,
    path_links,
    ring_latency,
    routing_from_strings,
    routing_to_strings,
    validate,
)
from .npverify import (
    FEAS_TOL,
    GridCell,
    GridReport,
    NPCandidate,
    consecutive_support_check,
    default_betas,
    edge_candidate_value,
    edge_stationary_x,
    edge_stationary_z,
    eval_fg,
    f_partials,
    g_partials,
    grid_certify,
    interior_candidate_value,
    interior_stationary_x,
    interior_stationary_z,
    kkt_candidates,
    solve_y_on_constraint,
    solve_z_on_constraint,
    support_constraint,
    support_objective,
    table_cases,
    target,
    x_floor_value,
)
from .optimum import (
    OptimumResult,
    PoAResult,
    brute_force_optimum,
    exact_optimum,
    iter_optimal,
    min_h_optimum,
    poa,
)
from .search import (
    ProbeResult,
    RandomSpec,
    SearchResult,
    SearchSpace,
    degree_probe,
    exhaustive_poa_search,
    random_instance,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "CCW",
    "CW",
    "Classification",
    "DEFAULT_ENUM_LIMIT",
    "DegenerateOptimum",
    "DeviationWitness",
    "FEAS_TOL",
    "GridCell",
    "GridReport",
    "InstanceAnalysis",
    "InstanceTooLarge",
    "NPCandidate",
    "NashCheck",
    "OptimumResult",
    "PoAResult",
    "ProbeResult",
    "RandomSpec",
    "RingInstance",
    "Routing",
    "SearchResult",
    "SearchSpace",
    "SplitProfile",
    "agent_latency",
    "agent_paths",
    "analyze_instance",
    "best_response",
    "best_response_trajectory",
    "brute_force_optimum",
    "check_all_bounds",
    "classify",
    "consecutive_support_check",
    "default_betas",
    "degree_probe",
    "dump_instance",
    "edge_candidate_value",
    "edge_stationary_x",
    "edge_stationary_z",
    "ensure_valid",
    "enumerate_nash",
    "eval_fg",
    "exact_optimum",
    "exhaustive_poa_search",
    "f_partials",
    "format_ratio",
    "g_partials",
    "grid_certify",
    "instance_from_dict",
    "instance_to_dict",
    "interior_candidate_value",
    "interior_stationary_x",
    "interior_stationary_z",
    "is_nash",
    "iter_optimal",
    "iter_routings",
    "kkt_candidates",
    "latency",
    "load_instance",
    "loads",
    "max_latency",
    "min_h_optimum",
    "norm_a",
    "norm_b",
    "pairwise_intersection_check",
    "path_links",
    "poa",
    "potential",
    "profile",
    "random_instance",
    "ring_latency",
    "routing_from_strings",
    "routing_to_strings",
    "singular_reduction",
    "solve_y_on_constraint",
    "solve_z_on_constraint",
    "split_links",
    "support_constraint",
    "support_objective",
    "table_cases",
    "target",
    "validate",
    "worst_nash",
    "x_floor_value",
]
