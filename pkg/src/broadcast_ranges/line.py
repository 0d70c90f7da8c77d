"""Optimal broadcast ranges on the line.

Every feasible optimum has a rigid shape: a chain of points from the source
s to one turning point p* whose range rho(p*) crosses back over s, with
every point inside p*'s reach hanging off it at range zero and plain chains
continuing outward from the last reached point on each side (an instance
whose points all sit on one side of s degenerates to p* = s with the chain
range).  The solver therefore scores only candidates (p*, lam) where lam is
a distance from p* to some point beyond s, plus (s, |s p|) for every p.

Scoring is additive bookkeeping: chain cost s..p*, plus lam**alpha, plus
the outward chain from the farthest reached point on each populated side.
A side that p*'s reach does not touch is charged its full outward chain
from the crossing boundary (p* itself, or s on the far side); that charge
is only ever an overcount for candidates that are never optimal, so the
minimum over all candidates is the exact optimum.  Materialized assignments
take per-point maxima of the chain requirements, hence stay feasible even
for those degenerate candidates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import EPS, Instance, Line, ValidationError, check_alpha, is_feasible

# candidates whose directly evaluated cost lies within BAND of the minimum
# are tie-broken deterministically; SLACK is the shortlist margin used by the
# maintained structure and must dominate float drift of incrementally kept
# values by orders of magnitude.
BAND = EPS
SLACK = 1e-6


@dataclass
class Axis:
    """Sorted view of a line instance. pref[i] = cost of the first i gaps."""

    ids: list
    xs: np.ndarray
    isrc: int
    pref: np.ndarray
    alpha: float


def build_axis_from_sorted(ids, xs_list, isrc, alpha) -> Axis:
    xs = np.asarray(xs_list, dtype=np.float64)
    if len(xs) > 1:
        pref = np.concatenate(([0.0], np.cumsum(np.power(np.diff(xs), alpha))))
    else:
        pref = np.zeros(1)
    return Axis(list(ids), xs, isrc, pref, alpha)


def build_axis(instance: Instance, alpha: float) -> Axis:
    if not isinstance(instance.space, Line):
        raise ValidationError("line solver fed a non-line instance")
    alpha = check_alpha(alpha)
    order = sorted(instance.points, key=lambda pid: instance.points[pid])
    xs = [float(instance.points[pid]) for pid in order]
    return build_axis_from_sorted(order, xs, order.index(instance.source), alpha)


def reach_bounds(xs: np.ndarray, ip: int, lams: np.ndarray):
    """Indices of the farthest point within lam of xs[ip] on each side.

    Comparisons run on stored pairwise distances (xs[j] - xs[ip]), the same
    floats the candidate ranges are built from, so a candidate's defining
    point always falls inside its own reach.
    """
    dr = xs[ip:] - xs[ip]
    er = ip + np.searchsorted(dr, lams, side="right") - 1
    rl = xs[ip] - xs[ip::-1]
    el = ip - (np.searchsorted(rl, lams, side="right") - 1)
    return er, el


def candidate_costs(axis: Axis, ip: int, lams: np.ndarray) -> np.ndarray:
    """Bookkeeping cost of Gamma(P, p*, lam) for each lam, vectorized."""
    xs, pref = axis.xs, axis.pref
    lo, hi = (ip, axis.isrc) if ip < axis.isrc else (axis.isrc, ip)
    er, el = reach_bounds(xs, ip, lams)
    er = np.maximum(er, hi)
    el = np.minimum(el, lo)
    return (pref[hi] - pref[lo]) + np.power(lams, axis.alpha) \
        + (pref[len(xs) - 1] - pref[er]) + pref[el]


def candidate_cost(axis: Axis, ip: int, lam: float) -> float:
    return float(candidate_costs(axis, ip, np.array([lam], dtype=np.float64))[0])


def candidate_ranges(axis: Axis, ip: int, counts: bool = False):
    """Candidate ranges for turning point xs[ip]: distances to points beyond
    the source (every inter-point distance when p* is the source itself)."""
    d = np.abs(axis.xs - axis.xs[ip])
    if ip == axis.isrc:
        vals = d[d > 0]
    else:
        vals = d[d > abs(axis.xs[ip] - axis.xs[axis.isrc])]
    if counts:
        return np.unique(vals, return_counts=True)
    return np.unique(vals)


@dataclass
class StructuredSolution:
    """One materialized optimum: the assignment plus its shape."""

    assignment: dict
    root: str
    root_range: float
    cost: float
    zero_left: tuple
    zero_right: tuple


def standard_range_at(axis: Axis, t: int) -> float:
    """Distance to the next point away from the source (0 for an extreme
    point; for the source itself, the larger of its two gaps)."""
    xs, isrc, n = axis.xs, axis.isrc, len(axis.xs)
    if t > isrc:
        return float(xs[t + 1] - xs[t]) if t < n - 1 else 0.0
    if t < isrc:
        return float(xs[t] - xs[t - 1]) if t > 0 else 0.0
    left = float(xs[t] - xs[t - 1]) if t > 0 else 0.0
    right = float(xs[t + 1] - xs[t]) if t < n - 1 else 0.0
    return max(left, right)


def source_side_gaps(axis: Axis):
    """(left gap, right gap) next to the source, 0.0 for an empty side."""
    xs, isrc, n = axis.xs, axis.isrc, len(axis.xs)
    left = float(xs[isrc] - xs[isrc - 1]) if isrc > 0 else 0.0
    right = float(xs[isrc + 1] - xs[isrc]) if isrc < n - 1 else 0.0
    return left, right


def materialize(axis: Axis, ip: int, lam: float) -> StructuredSolution:
    """Turn a scored candidate into an actual assignment.

    Each point's range is the max of the chain requirements falling on it,
    so degenerate candidates (a side charged from the boundary because the
    reach misses it) still come out feasible; for non-degenerate candidates
    the true cost equals the bookkeeping cost.
    """
    xs, isrc, n = axis.xs, axis.isrc, len(axis.xs)
    req = [0.0] * n
    lo, hi = (ip, isrc) if ip < isrc else (isrc, ip)
    if ip > isrc:
        for t in range(isrc, ip):
            req[t] = max(req[t], float(xs[t + 1] - xs[t]))
    elif ip < isrc:
        for t in range(ip + 1, isrc + 1):
            req[t] = max(req[t], float(xs[t] - xs[t - 1]))
    req[ip] = max(req[ip], lam)
    er, el = reach_bounds(xs, ip, np.array([lam], dtype=np.float64))
    er = max(int(er[0]), hi)
    el = min(int(el[0]), lo)
    for t in range(er, n - 1):
        req[t] = max(req[t], float(xs[t + 1] - xs[t]))
    for t in range(1, el + 1):
        req[t] = max(req[t], float(xs[t] - xs[t - 1]))

    assignment = {axis.ids[t]: req[t] for t in range(n)}
    zero_left = tuple(axis.ids[t] for t in range(1, isrc) if req[t] == 0.0)
    zero_right = tuple(axis.ids[t] for t in range(isrc + 1, n - 1) if req[t] == 0.0)
    return StructuredSolution(assignment, axis.ids[ip], lam,
                              candidate_cost(axis, ip, lam), zero_left, zero_right)


def select_band(entries, band: float = BAND):
    """Deterministic winner among scored candidates.

    entries: (cost, dist-from-source, lam, signed coordinate, ip) tuples.
    All candidates within `band` of the cheapest tie-break by distance from
    the source, then smaller range, then signed coordinate.
    """
    entries = list(entries)
    best = min(e[0] for e in entries)
    return min((e for e in entries if e[0] <= best + band),
               key=lambda e: (e[1], e[2], e[3]))


def solve_optimal_r1(instance: Instance, alpha: float) -> StructuredSolution:
    """Exact optimum over all candidate turning points and ranges, O(n^2)."""
    axis = build_axis(instance, alpha)
    n = len(axis.xs)
    if n == 1:
        return StructuredSolution({instance.source: 0.0}, instance.source,
                                  0.0, 0.0, (), ())
    scored = []
    best = float("inf")
    for ip in range(n):
        lams = candidate_ranges(axis, ip)
        if len(lams) == 0:
            continue
        costs = candidate_costs(axis, ip, lams)
        scored.append((ip, lams, costs))
        m = float(costs.min())
        if m < best:
            best = m
    entries = []
    xsrc = axis.xs[axis.isrc]
    for ip, lams, costs in scored:
        for j in np.nonzero(costs <= best + BAND)[0]:
            entries.append((float(costs[j]), abs(float(axis.xs[ip]) - float(xsrc)),
                            float(lams[j]), float(axis.xs[ip]), ip))
    cost, _, lam, _, ip = select_band(entries)
    sol = materialize(axis, ip, lam)
    sol.cost = cost
    return sol


def validate_structure(instance: Instance, alpha: float, sol: StructuredSolution) -> None:
    """Raise unless `sol` has the rigid optimal-solution shape."""
    axis = build_axis(instance, alpha)
    n = len(axis.xs)
    if set(sol.assignment) != set(instance.points):
        raise ValidationError("assignment domain differs from the point set")
    if not is_feasible(instance, sol.assignment):
        raise ValidationError("assignment is not feasible")
    if n == 1:
        return
    index = {pid: t for t, pid in enumerate(axis.ids)}
    long_range = []
    for pid, r in sol.assignment.items():
        t = index[pid]
        std = standard_range_at(axis, t)
        floor = min(source_side_gaps(axis)) if t == axis.isrc else std
        if r > std + EPS:
            long_range.append(pid)
        if EPS < r < floor - EPS:
            raise ValidationError(
                f"range of {pid!r} sits strictly between 0 and its standard range")
    if any(pid != sol.root for pid in long_range) or len(long_range) > 1:
        raise ValidationError(f"long-range points {long_range} beyond the root")
    for ids in (sol.zero_left, sol.zero_right):
        ts = sorted(index[pid] for pid in ids)
        if ts and ts != list(range(ts[0], ts[-1] + 1)):
            raise ValidationError("zero-range points are not consecutive")
    redone = materialize(axis, index[sol.root], sol.root_range)
    if redone.assignment != sol.assignment:
        raise ValidationError("assignment does not match its declared shape")
