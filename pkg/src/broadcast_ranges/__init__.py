"""Broadcast range assignment on the line, the circle, and the plane.

Exact solvers (static and fully dynamic), stability-bounded maintainers
that trade approximation for bounded per-update churn, adversarial
workload generators, and a replay harness with CSV/JSON reporting.
"""

from .circle import (
    CircleSolution,
    NoSasParams,
    cut_map,
    find_uncovered_point,
    gen_s1_no_sas,
    no_sas_params,
    solve_optimal_s1,
)
from .harness import (
    AlgorithmSpec,
    StepReport,
    Trace,
    advertised_change_bound,
    parse_algorithm,
    random_trace,
    run_trace,
    summarize,
)
from .line import StructuredSolution, solve_optimal_r1, standard_range_at
from .line_dynamic import DynamicOptimum
from .model import (
    EPS,
    Circle,
    Instance,
    Line,
    Plane,
    StabilityDelta,
    TraceEvent,
    ValidationError,
    assignment_diff,
    cost_alpha,
    is_feasible,
)
from .oracle import ORACLE_LIMIT, brute_force_cost, brute_force_optimal
from .plane import (
    Mst,
    build_mst,
    gen_r2_no_sas,
    mst_range_assignment,
    mst_update,
    opt_lower_bound_r2,
)
from .sas import (
    StableApproximation,
    approx_factor,
    canonical_assignment,
    gen_sas_lower_bound,
    stability_param,
)
from .stable import (
    OneStable,
    ThreeStable,
    TwoStable,
    default_delta,
    ratio_constant,
    source_based_assignment,
    standard_assignment,
)

__version__ = "0.1.0"

__all__ = [
    "EPS",
    "ORACLE_LIMIT",
    "AlgorithmSpec",
    "Circle",
    "CircleSolution",
    "DynamicOptimum",
    "Instance",
    "Line",
    "Mst",
    "NoSasParams",
    "OneStable",
    "Plane",
    "StabilityDelta",
    "StableApproximation",
    "StepReport",
    "StructuredSolution",
    "ThreeStable",
    "Trace",
    "TraceEvent",
    "TwoStable",
    "ValidationError",
    "advertised_change_bound",
    "approx_factor",
    "assignment_diff",
    "brute_force_cost",
    "brute_force_optimal",
    "build_mst",
    "canonical_assignment",
    "cost_alpha",
    "cut_map",
    "default_delta",
    "find_uncovered_point",
    "gen_r2_no_sas",
    "gen_s1_no_sas",
    "gen_sas_lower_bound",
    "is_feasible",
    "mst_range_assignment",
    "mst_update",
    "no_sas_params",
    "opt_lower_bound_r2",
    "parse_algorithm",
    "random_trace",
    "ratio_constant",
    "run_trace",
    "solve_optimal_r1",
    "solve_optimal_s1",
    "source_based_assignment",
    "stability_param",
    "standard_assignment",
    "standard_range_at",
    "summarize",
    "__version__",
]
