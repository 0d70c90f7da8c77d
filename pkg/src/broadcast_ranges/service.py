"""Shared entry points behind both the CLI and the HTTP service.

Everything here takes and returns plain core objects; transport-specific
serialization lives in fileio (files) and schemas (request and response
models).
"""
from __future__ import annotations

from typing import Dict, List, Tuple

from .circle import gen_s1_no_sas, solve_optimal_s1
from .harness import StepReport, Trace, random_trace, run_trace, summarize
from .line import solve_optimal_r1
from .model import (
    Circle,
    Instance,
    Line,
    ValidationError,
    check_alpha,
    cost_alpha,
)
from .oracle import ORACLE_LIMIT, brute_force_optimal
from .plane import gen_r2_no_sas
from .sas import gen_sas_lower_bound

GENERATOR_KINDS = (
    "sas-lb", "s1-nosas", "r2-nosas",
    "uniform", "clustered", "uniform-plane", "clustered-plane",
)


def solve(instance: Instance, alpha: float) -> Dict:
    """Exact optimum for the instance's space.

    Plane instances go through exhaustive search, which only scales to
    ORACLE_LIMIT points; larger planar inputs should be simulated with the
    tree-based maintainer instead.
    """
    alpha = check_alpha(alpha)
    out: Dict = {"alpha": alpha}
    if isinstance(instance.space, Line):
        sol = solve_optimal_r1(instance, alpha)
        out.update(space="line", assignment=dict(sol.assignment),
                   cost=cost_alpha(sol.assignment, alpha),
                   root=sol.root, root_range=sol.root_range)
    elif isinstance(instance.space, Circle):
        sol = solve_optimal_s1(instance, alpha)
        out.update(space="circle", assignment=dict(sol.assignment),
                   cost=cost_alpha(sol.assignment, alpha),
                   cut_index=sol.cut_index)
    else:
        if len(instance.points) > ORACLE_LIMIT:
            raise ValidationError(
                f"planar exact solve is exhaustive and limited to "
                f"{ORACLE_LIMIT} points; run the mst simulation instead")
        assignment = brute_force_optimal(instance, alpha)
        out.update(space="plane", assignment=dict(assignment),
                   cost=cost_alpha(assignment, alpha))
    return out


def simulate(
    instance: Instance,
    trace: Trace,
    algorithm: str,
    alpha: float,
    seed: int = 0,
    timing: bool = False,
) -> Tuple[List[StepReport], Dict]:
    reports = run_trace(instance, trace, algorithm, alpha,
                        seed=seed, measure_time=timing)
    return reports, summarize(reports)


def generate(kind: str, n: int, alpha: float = 2.0,
             seed: int = 0) -> Tuple[Instance, Trace]:
    """Named workloads: adversarial constructions plus random streams.

    For "sas-lb" the size parameter is the stability budget k (even, at
    least 4); for the no-improvement families it is the gap-pair count n;
    for random workloads it is the number of events.
    """
    if kind == "sas-lb":
        instance, event = gen_sas_lower_bound(n, alpha)
        return instance, Trace((event,))
    if kind == "s1-nosas":
        instance, event = gen_s1_no_sas(n, alpha)
        return instance, Trace((event,))
    if kind == "r2-nosas":
        instance, event = gen_r2_no_sas(n, alpha)
        return instance, Trace((event,))
    if kind in ("uniform", "clustered", "uniform-plane", "clustered-plane"):
        return random_trace(kind, n, seed=seed, alpha=alpha)
    raise ValidationError(
        f"unknown generator {kind!r}; pick one of {', '.join(GENERATOR_KINDS)}")
