"""Exact minimum-cost reference for small instances, any of the three metrics.

Works as a shortest-path search over subsets of reached points: a state is
the set of points the source can currently reach, a transition picks one
reached point and assigns it one of the candidate ranges {d(p, q) : q in P}.
Re-assigning a point is strictly dominated (one larger range reaches at
least as far for less), so the cheapest path assigns each point at most
once and its cost is the exact optimum.
"""
from __future__ import annotations

import heapq

from .model import Instance, ValidationError, check_alpha, cost_alpha

ORACLE_LIMIT = 7


def brute_force_optimal(instance: Instance, alpha: float, limit: int = ORACLE_LIMIT):
    """Return a minimum-cost feasible assignment as an id -> range dict.

    Deterministic: the heap is keyed by (cost, state, point, range-index) so
    ties resolve the same way on every run.  Raises if the instance has more
    than `limit` points; the state space is 2**n.
    """
    check_alpha(alpha)
    n = instance.n
    if n > limit:
        raise ValidationError(f"oracle limited to {limit} points, got {n}")
    ids = sorted(instance.points)
    src = ids.index(instance.source)
    if n == 1:
        return {instance.source: 0.0}

    # candidate ranges per point, ascending, with the subset each one reaches
    dist = [[instance.dist(a, b) for b in ids] for a in ids]
    moves = []
    for i in range(n):
        reach = {}
        for j in range(n):
            if j == i:
                continue
            r = dist[i][j]
            mask = 0
            for t in range(n):
                if t != i and dist[i][t] <= r + 1e-15:
                    mask |= 1 << t
            reach[r] = reach.get(r, 0) | mask
        moves.append(sorted(reach.items()))

    full = (1 << n) - 1
    start = 1 << src
    best = {start: 0.0}
    parent = {start: None}
    heap = [(0.0, start)]
    while heap:
        cost, state = heapq.heappop(heap)
        if cost > best.get(state, float("inf")):
            continue
        if state == full:
            break
        for i in range(n):
            if not state & (1 << i):
                continue
            for r, mask in moves[i]:
                nxt = state | mask
                if nxt == state:
                    continue
                c2 = cost + r ** alpha
                if c2 < best.get(nxt, float("inf")) - 1e-18:
                    best[nxt] = c2
                    parent[nxt] = (state, i, r)
                    heapq.heappush(heap, (c2, nxt))

    assignment = {pid: 0.0 for pid in ids}
    state = full
    while parent[state] is not None:
        state, i, r = parent[state]
        assignment[ids[i]] = max(assignment[ids[i]], r)
    return assignment


def brute_force_cost(instance: Instance, alpha: float, limit: int = ORACLE_LIMIT) -> float:
    return cost_alpha(brute_force_optimal(instance, alpha, limit), alpha)
