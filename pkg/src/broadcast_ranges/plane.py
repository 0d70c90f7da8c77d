"""Incremental Euclidean minimum spanning tree and its range assignment.

Exact planar optimization is out of reach, so the plane pipeline rests on
the MST: give each point the length of its longest incident tree edge.
Rebuilding the tree after every update under a stable edge order that
prefers the previous tree's edges keeps the rebuild local: an insertion
only adds edges at the new point, a deletion only reconnects the hole.
The tree also certifies a lower bound on the optimum for exponents >= 2,
which is what ratio reports divide by.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .circle import no_sas_params
from .model import (
    EPS,
    Instance,
    Plane,
    TraceEvent,
    ValidationError,
    check_alpha,
)


def _euclid(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


class _UnionFind:
    def __init__(self, ids):
        self.parent = {i: i for i in ids}
        self.size = {i: 1 for i in ids}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _ordered_kruskal(coords: Dict[str, tuple], prefer: FrozenSet[tuple]) -> Tuple[tuple, ...]:
    """Tree edges under the order (length, not-in-prefer, id pair)."""
    ids = sorted(coords)
    cand = []
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            cand.append((_euclid(coords[a], coords[b]),
                         0 if (a, b) in prefer else 1, a, b))
    cand.sort()
    uf = _UnionFind(ids)
    picked: List[tuple] = []
    want = len(ids) - 1
    for _, _, a, b in cand:
        if uf.union(a, b):
            picked.append((a, b))
            if len(picked) == want:
                break
    return tuple(sorted(picked))


@dataclass(frozen=True)
class Mst:
    """Spanning tree over labeled planar points; edges (ida, idb), ida < idb."""

    source: str
    coords: Dict[str, Tuple[float, float]]
    edges: Tuple[tuple, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    def length(self, edge: tuple) -> float:
        return _euclid(self.coords[edge[0]], self.coords[edge[1]])

    def weight(self) -> float:
        return sum(self.length(e) for e in self.edges)

    def power_weight(self, alpha: float) -> float:
        check_alpha(alpha)
        return sum(self.length(e) ** alpha for e in self.edges)

    def degrees(self) -> Dict[str, int]:
        deg = {pid: 0 for pid in self.coords}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def check_tree(self) -> None:
        """Spanning + acyclic, which for |P|-1 distinct edges is one check."""
        if len(self.edges) != self.n - 1:
            raise AssertionError("edge count is not |P|-1")
        uf = _UnionFind(sorted(self.coords))
        for a, b in self.edges:
            if not uf.union(a, b):
                raise AssertionError("tree edges contain a cycle")


def build_mst(instance: Instance) -> Mst:
    if not isinstance(instance.space, Plane):
        raise ValidationError("tree maintainer fed a non-plane instance")
    coords = {p: (float(c[0]), float(c[1])) for p, c in instance.points.items()}
    return Mst(instance.source, coords, _ordered_kruskal(coords, frozenset()))


def mst_update(tree: Mst, event: TraceEvent) -> Mst:
    """Rebuild after one update, preferring the previous tree's edges among
    equal-length candidates so the change stays local to the touched point."""
    coords = dict(tree.coords)
    if event.op == "insert":
        if event.pid in coords:
            raise ValidationError(f"point id {event.pid!r} already present")
        c = (float(event.coord[0]), float(event.coord[1]))
        for pid, xy in coords.items():
            if _euclid(c, xy) <= EPS:
                raise ValidationError(
                    f"coordinate of {event.pid!r} collides with {pid!r}")
        coords[event.pid] = c
    else:
        if event.pid == tree.source:
            raise ValidationError("cannot delete the source")
        if event.pid not in coords:
            raise ValidationError(f"point id {event.pid!r} not present")
        del coords[event.pid]
    return Mst(tree.source, coords, _ordered_kruskal(coords, frozenset(tree.edges)))


def fresh_mst_weight(coords: Dict[str, tuple]) -> float:
    """Independent cross-check: Kruskal ordered by (length, id pair) only."""
    plain = {p: (float(c[0]), float(c[1])) for p, c in coords.items()}
    edges = _ordered_kruskal(plain, frozenset())
    return sum(_euclid(plain[a], plain[b]) for a, b in edges)


def insert_locality_ok(old: Mst, new: Mst, pid: str) -> bool:
    """Every new edge not touching the inserted point existed before."""
    had = set(old.edges)
    return all(e in had for e in new.edges if pid not in e)


def delete_persistence_ok(old: Mst, new: Mst, pid: str) -> bool:
    """Every old edge not touching the deleted point survived."""
    kept = set(new.edges)
    return all(e in kept for e in old.edges if pid not in e)


def mst_range_assignment(tree: Mst) -> Dict[str, float]:
    """Longest incident tree edge per point (0 for a singleton source)."""
    rho = {pid: 0.0 for pid in tree.coords}
    for e in tree.edges:
        ln = tree.length(e)
        for pid in e:
            if ln > rho[pid]:
                rho[pid] = ln
    return rho


def opt_lower_bound_r2(tree: Mst, alpha: float) -> float:
    """Certified lower bound on the planar optimum: tree power weight / 6.
    Only valid for exponents >= 2."""
    alpha = check_alpha(alpha)
    if alpha < 2.0:
        raise ValidationError(
            f"the planar lower bound needs an exponent >= 2, got {alpha}")
    return tree.power_weight(alpha) / 6.0


def _general_position(coords: Dict[str, tuple], tol: float) -> bool:
    """No two inter-point distances agree within tol."""
    ids = sorted(coords)
    dists = sorted(
        _euclid(coords[a], coords[b])
        for i, a in enumerate(ids)
        for b in ids[i + 1 :]
    )
    return all(b - a > tol for a, b in zip(dists, dists[1:]))


def degree_ok(tree: Mst, tol: float = EPS) -> bool:
    """Max degree is at most six in general position; degenerate inputs
    (repeated inter-point distances) only warn on a violation."""
    worst = max(tree.degrees().values(), default=0)
    if worst <= 6:
        return True
    if _general_position(tree.coords, tol):
        raise AssertionError(f"tree degree {worst} exceeds 6 in general position")
    warnings.warn(f"tree degree {worst} exceeds 6 on a degenerate input")
    return False


def _square_point(t: float, side: float) -> Tuple[float, float]:
    """Clockwise walk of the square boundary from the bottom-edge midpoint
    (side/2, 0) toward the origin; t is arc length in [0, 4*side)."""
    t = float(t) % (4.0 * side)
    if t <= 0.5 * side:
        return (0.5 * side - t, 0.0)
    t -= 0.5 * side
    if t <= side:
        return (0.0, t)
    t -= side
    if t <= side:
        return (t, side)
    t -= side
    if t <= side:
        return (side, side - t)
    t -= side
    return (side - t, 0.0)


def gen_r2_no_sas(n: int, alpha: float = 2.0):
    """The circle churn family folded onto a square of the same perimeter;
    boundary gaps are preserved, so the far insertion again lands opposite
    the source.  Returns (instance, pending event)."""
    params = no_sas_params(n, alpha)
    side = params.perimeter / 4.0
    delta, x = params.delta, params.x
    points: Dict[str, tuple] = {"s": _square_point(0.0, side)}
    pos = delta
    points["p1"] = _square_point(pos, side)
    for i in range(1, 2 * n + 1):
        pos += 2.0 if i % 2 else 1.0
        points[f"p{i + 1}"] = _square_point(pos, side)
    q_at = _square_point(pos + x * delta, side)
    instance = Instance(Plane(), "s", points)
    return instance, TraceEvent("insert", "q", q_at)
