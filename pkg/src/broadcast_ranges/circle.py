"""Exact optimum on the circle by unrolling at every candidate cut.

Some position on the circle is outside everyone's reach in an optimal
assignment, so cutting the circle there and unrolling it to a line
preserves the optimum.  The cut can be normalized to one representative
per inter-point gap: line distances only grow compared to arc distances,
so each unrolled optimum is circle-feasible, and the best gap attains the
true optimum.  The solver tries all |P| gaps; the fast path reuses one
dynamic line structure and relocates a single point per gap, the slow
path re-solves every cut from scratch as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .line import solve_optimal_r1
from .line_dynamic import DynamicOptimum
from .model import (
    EPS,
    Circle,
    Instance,
    Line,
    TraceEvent,
    ValidationError,
    check_alpha,
)


def _require_circle(instance: Instance) -> Circle:
    if not isinstance(instance.space, Circle):
        raise ValidationError("circle solver fed a non-circle instance")
    return instance.space


def _cw_points(instance: Instance) -> Tuple[List[str], List[float]]:
    """Non-source ids with positions relative to the source, clockwise."""
    base = float(instance.points[instance.source])
    rel = {p: float(c) - base for p, c in instance.points.items()
           if p != instance.source}
    ids = sorted(rel, key=rel.get)
    return ids, [rel[p] for p in ids]


def cut_map(instance: Instance, r: float) -> Instance:
    """Unroll the circle at position r (relative to the source): positions
    clockwise before r keep their clockwise distance, positions after r
    get minus their counterclockwise distance."""
    space = _require_circle(instance)
    perimeter = space.perimeter
    r = float(r) % perimeter
    ids, rel = _cw_points(instance)
    for pid, c in zip(ids, rel):
        if abs(c - r) <= EPS or abs(c - r + perimeter) <= EPS or abs(c - r - perimeter) <= EPS:
            raise ValidationError(f"cut position {r} coincides with point {pid!r}")
    if r <= EPS or r >= perimeter - EPS:
        raise ValidationError(f"cut position {r} coincides with the source")
    points: Dict[str, float] = {instance.source: 0.0}
    for pid, c in zip(ids, rel):
        points[pid] = c if c < r else -(perimeter - c)
    return Instance(Line(), instance.source, points)


@dataclass
class CircleSolution:
    """Best unrolled optimum: the winning gap plus every gap's cost."""

    assignment: Dict[str, float]
    cost: float
    cut_index: int
    cut_costs: Tuple[float, ...]


def solve_optimal_s1(instance: Instance, alpha: float, fast: bool = True) -> CircleSolution:
    """Exact circle optimum.  Gap i is the arc between the i-th clockwise
    point and its clockwise successor (gap 0 starts at the source); ties
    between gaps fall to the smaller index.
    """
    space = _require_circle(instance)
    alpha = check_alpha(alpha)
    perimeter = space.perimeter
    ids, rel = _cw_points(instance)
    if not ids:
        return CircleSolution({instance.source: 0.0}, 0.0, 0, (0.0,))
    if fast:
        coords = {instance.source: 0.0}
        for pid, c in zip(ids, rel):
            coords[pid] = -(perimeter - c)
        dyn = DynamicOptimum(Instance(Line(), instance.source, coords), alpha)
        costs: List[float] = []
        best = None
        for i in range(len(ids) + 1):
            if i > 0:
                dyn.delete(ids[i - 1])
                dyn.insert(ids[i - 1], rel[i - 1])
            sol = dyn.current_optimum()
            costs.append(sol.cost)
            if best is None or sol.cost < best[0]:
                best = (sol.cost, i, sol.assignment)
    else:
        costs = []
        best = None
        bounds = [0.0] + rel + [perimeter]
        for i in range(len(ids) + 1):
            mid = 0.5 * (bounds[i] + bounds[i + 1])
            sol = solve_optimal_r1(cut_map(instance, mid), alpha)
            costs.append(sol.cost)
            if best is None or sol.cost < best[0]:
                best = (sol.cost, i, sol.assignment)
    cost, cut, assignment = best
    return CircleSolution(dict(assignment), cost, cut, tuple(costs))


def find_uncovered_point(instance: Instance, assignment: Dict[str, float]) -> Optional[float]:
    """Position (relative to the source) outside every point's reach, at
    the middle of the widest uncovered stretch; None if reaches cover the
    whole circle.  Arcs are treated as closed and merged within EPS."""
    space = _require_circle(instance)
    perimeter = space.perimeter
    ids, rel = _cw_points(instance)
    arcs: List[Tuple[float, float]] = []
    for pid, c in zip([instance.source] + ids, [0.0] + rel):
        rho = float(assignment.get(pid, 0.0))
        if rho < 0:
            raise ValidationError(f"negative range {rho} for {pid!r}")
        if 2 * rho >= perimeter:
            return None
        lo, hi = c - rho, c + rho
        if lo < 0:
            arcs.append((lo + perimeter, perimeter))
            arcs.append((0.0, hi))
        elif hi > perimeter:
            arcs.append((lo, perimeter))
            arcs.append((0.0, hi - perimeter))
        else:
            arcs.append((lo, hi))
    arcs.sort()
    merged = [list(arcs[0])]
    for lo, hi in arcs[1:]:
        if lo <= merged[-1][1] + EPS:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    # seam: last arc wrapping to the first
    if len(merged) > 1 and merged[0][0] + perimeter <= merged[-1][1] + EPS:
        merged[0][0] = merged[-1][0] - perimeter
        merged[0][1] = max(merged[0][1], merged[-1][1] - perimeter)
        merged.pop()
    if len(merged) == 1 and merged[0][1] - merged[0][0] >= perimeter - EPS:
        return None
    gaps = []
    for a, b in zip(merged, merged[1:] + [[merged[0][0] + perimeter, 0.0]]):
        gaps.append((a[1], b[0]))
    width, at = max(((hi - lo), lo + 0.5 * (hi - lo)) for lo, hi in gaps)
    if width <= 0:
        return None
    return at % perimeter


@dataclass(frozen=True)
class NoSasParams:
    """Layout constants of the churn-forcing circle family."""

    n: int
    alpha: float
    delta: float
    x: float
    perimeter: float


def no_sas_params(n: int, alpha: float = 2.0) -> NoSasParams:
    alpha = check_alpha(alpha)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"need a positive integer n, got {n!r}")
    delta = ((2.0 ** alpha + 1.0) * n) ** (1.0 / alpha)
    x = (0.25 + 0.5 ** (alpha + 1.0)) ** (1.0 / alpha)
    perimeter = delta + 3.0 * n + 2.0 * x * delta
    return NoSasParams(n, alpha, delta, x, perimeter)


def gen_s1_no_sas(n: int, alpha: float = 2.0):
    """Circle family whose optimum rearranges almost everywhere when one
    far point arrives: 2n+1 points alternate gaps of 2 and 1 beyond an
    expensive lead-in arc, and the pending insertion lands opposite the
    source.  Returns (instance, pending event)."""
    params = no_sas_params(n, alpha)
    delta, x = params.delta, params.x
    points: Dict[str, float] = {"s": 0.0}
    pos = delta
    points["p1"] = pos
    for i in range(1, 2 * n + 1):
        pos += 2.0 if i % 2 else 1.0
        points[f"p{i + 1}"] = pos
    q_at = pos + x * delta
    instance = Instance(Circle(params.perimeter), "s", points)
    return instance, TraceEvent("insert", "q", q_at)
