"""Bounded-churn near-optimal assignments on the line.

The exact optimum can rewrite almost every range after a single update, so
an exact maintainer has unbounded churn.  The canonical assignment rho_k
trades a (1 + 2**alpha / k**(alpha-1)) cost factor for bounded churn: take
the deterministic optimum, keep only the k interior zero-range points with
the largest standard ranges at zero, and restore every other interior zero
to its standard range.  rho_k is a pure function of the point set, so the
per-update change counts are well defined regardless of replay order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .line import Axis, build_axis, solve_optimal_r1, standard_range_at
from .line_dynamic import DynamicOptimum
from .model import (
    Instance,
    Line,
    StabilityDelta,
    TraceEvent,
    ValidationError,
    assignment_diff,
    check_alpha,
    cost_alpha,
)


def stability_param(eps: float, alpha: float) -> int:
    """Smallest churn budget k that still guarantees a (1 + eps) factor."""
    check_alpha(alpha)
    if not eps > 0.0:
        raise ValidationError(f"approximation slack must be positive, got {eps}")
    raw = (2.0 ** alpha / eps) ** (1.0 / (alpha - 1.0))
    # Float noise can land a hair above the exact integer; nudge before ceil.
    return max(1, math.ceil(raw - 1e-9 * max(1.0, raw)))


def approx_factor(k: int, alpha: float) -> Optional[float]:
    """Cost guarantee of rho_k relative to the optimum, None for k = 0
    (the all-standard-ranges variant carries no bound)."""
    check_alpha(alpha)
    _check_k(k)
    if k == 0:
        return None
    return 1.0 + 2.0 ** alpha / float(k) ** (alpha - 1.0)


def _check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise ValidationError(f"churn budget must be a non-negative integer, got {k!r}")
    return k


@dataclass(frozen=True)
class CanonicalState:
    """rho_k next to the reference optimum it was derived from."""

    assignment: dict
    cost: float
    optimum: dict
    opt_cost: float
    interior_zeros: Tuple[str, ...]
    kept_zero: Tuple[str, ...]


def _canonical_from_solution(axis: Axis, sol, alpha: float, k: int) -> CanonicalState:
    zeros = list(sol.zero_left) + list(sol.zero_right)
    index = {pid: t for t, pid in enumerate(axis.ids)}
    ranked = sorted(
        zeros,
        key=lambda pid: (-standard_range_at(axis, index[pid]), float(axis.xs[index[pid]])),
    )
    rho = dict(sol.assignment)
    for pid in ranked[k:]:
        rho[pid] = standard_range_at(axis, index[pid])
    return CanonicalState(
        assignment=rho,
        cost=cost_alpha(rho, alpha),
        optimum=dict(sol.assignment),
        opt_cost=sol.cost,
        interior_zeros=tuple(sorted(zeros)),
        kept_zero=tuple(sorted(ranked[:k])),
    )


def canonical_assignment(instance: Instance, alpha: float, k: int) -> CanonicalState:
    """rho_k for one static instance (one-sided sets come back unchanged:
    their optimum has no interior zero to restore)."""
    alpha = check_alpha(alpha)
    _check_k(k)
    sol = solve_optimal_r1(instance, alpha)
    return _canonical_from_solution(build_axis(instance, alpha), sol, alpha, k)


class StableApproximation:
    """Maintains rho_k across insertions and deletions.

    Each update refreshes the underlying exact optimum and re-derives the
    canonical assignment from it, so the published ranges after any trace
    depend only on the surviving point set.  Per update at most k+3 ranges
    grow and at most k+3 shrink.
    """

    def __init__(self, instance: Instance, alpha: float, k: int):
        self.k = _check_k(k)
        self.dyn = DynamicOptimum(instance, alpha)
        self.alpha = self.dyn.alpha
        self.state = self._refresh()

    def _refresh(self) -> CanonicalState:
        sol = self.dyn.current_optimum()
        return _canonical_from_solution(self.dyn.axis, sol, self.alpha, self.k)

    @property
    def assignment(self) -> dict:
        return self.state.assignment

    def insert(self, pid: str, coord: float):
        return self.apply_update("insert", pid, coord)

    def delete(self, pid: str):
        return self.apply_update("delete", pid)

    def apply_update(self, op: str, pid: str, coord: float = None):
        """Replay one event; returns (new state, churn vs previous state)."""
        prev = self.state.assignment
        self.dyn.apply_update(op, pid, coord)
        self.state = self._refresh()
        return self.state, assignment_diff(prev, self.state.assignment)


def gen_sas_lower_bound(k: int, alpha: float = 2.0):
    """Adversarial pair: 2k points at i/(2k) spanning (0, 1], whose optimum
    is the fine chain, plus a pending far insertion at -1 that flips the
    optimum to a single source range and forces mass churn on any
    low-budget maintainer.  Returns (instance, pending event).
    """
    check_alpha(alpha)
    if isinstance(k, bool) or not isinstance(k, int) or k < 4 or k % 2:
        raise ValidationError(f"generator needs an even integer k >= 4, got {k!r}")
    points = {"s": 0.0}
    for i in range(1, 2 * k + 1):
        points[f"r{i}"] = i / (2.0 * k)
    instance = Instance(space=Line(), source="s", points=points)
    return instance, TraceEvent("insert", "l1", -1.0)
