"""Low-churn range maintainers on the line.

Three algorithms trading cost for churn, from strictest to loosest churn
budget:

* OneStable: insertion-only; at most one published range changes per
  insertion.  Each side of the source is kept as a chain of blocks of two
  to five points whose head broadcasts to the block's last point; a block
  reaching five points stages a ranged middle point so the six-point split
  later touches only the head.
* TwoStable: every point carries its standard range (the gap to its
  successor away from the source, the larger side gap for the source).
  At most two ranges change per update and the cost stays within twice
  the optimum for every cost exponent.
* ThreeStable: the source-based scheme with parameter delta in (1/2, 1).
  A point is expensive when its gap to its successor exceeds delta times
  the successor's distance from the source; the source broadcasts to the
  farthest successor of an expensive point, other expensive points are
  silent, cheap points keep standard ranges.  Insertions change at most
  (2 up, 1 down), deletions at most (1 up, 2 down).
"""
from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .model import (
    EPS,
    Instance,
    Line,
    StabilityDelta,
    ValidationError,
    assignment_diff,
)


def _require_line(instance: Instance) -> None:
    if not isinstance(instance.space, Line):
        raise ValidationError("line maintainer fed a non-line instance")


# ---------------------------------------------------------------------------
# 1-stable
# ---------------------------------------------------------------------------


@dataclass
class _Block:
    """Chain positions [lo, hi] whose head broadcasts to position hi; mid is
    the staged middle of a five-point block, -1 when absent."""

    lo: int
    hi: int
    mid: int = -1


class _SideChain:
    """One side of the source: positions 0 (the source) outward."""

    __slots__ = ("dists", "ids", "blocks")

    def __init__(self, source: str):
        self.dists: List[float] = [0.0]
        self.ids: List[str] = [source]
        self.blocks: List[_Block] = []

    def head_range(self) -> float:
        """Implied range of the source within this side."""
        if not self.blocks:
            return 0.0
        first = self.blocks[0]
        if first.lo != 0:
            raise AssertionError("side blocks lost their head")
        return self.dists[first.hi]

    def insert(self, d: float, pid: str) -> Optional[Tuple[str, float]]:
        """Add a point at distance d; returns the one (point, new range)
        bookkeeping change, or None for an absorbed interior insertion."""
        t = bisect_left(self.dists, d)
        for b in self.blocks:
            if b.lo >= t:
                b.lo += 1
            if b.hi >= t:
                b.hi += 1
            if b.mid >= t:
                b.mid += 1
        self.dists.insert(t, d)
        self.ids.insert(t, pid)
        if t == len(self.dists) - 1:
            self.blocks.append(_Block(t - 1, t))
            return self.ids[t - 1], d - self.dists[t - 1]
        blk = next(b for b in self.blocks if b.lo < t <= b.hi)
        size = blk.hi - blk.lo + 1
        if size <= 4:
            return None
        if size == 5:
            blk.mid = blk.lo + 2
            return self.ids[blk.mid], self.dists[blk.hi] - self.dists[blk.mid]
        if blk.mid < 0:
            raise AssertionError("six-point block without a staged middle")
        at = self.blocks.index(blk)
        self.blocks[at : at + 1] = [_Block(blk.lo, blk.mid), _Block(blk.mid, blk.hi)]
        return self.ids[blk.lo], self.dists[blk.mid] - self.dists[blk.lo]

    def check(self) -> None:
        """Block partition invariants; raises AssertionError on violation."""
        if not self.blocks:
            if len(self.dists) != 1:
                raise AssertionError("points outside any block")
            return
        if self.blocks[0].lo != 0 or self.blocks[-1].hi != len(self.dists) - 1:
            raise AssertionError("blocks do not tile the side")
        for prev, cur in zip(self.blocks, self.blocks[1:]):
            if prev.hi != cur.lo:
                raise AssertionError("adjacent blocks do not share a point")
        for b in self.blocks:
            span = b.hi - b.lo
            if not 1 <= span <= 4:
                raise AssertionError(f"block spans {span} gaps")
            if span == 4 and b.mid != b.lo + 2:
                raise AssertionError("five-point block lacks its middle")
            if span < 4 and b.mid != -1:
                raise AssertionError("undersized block carries a middle")


class OneStable:
    """Insertion-only maintainer; at most one published range changes per
    insertion.  Deletions are rejected: no single-change rule can keep a
    bounded cost ratio once points may leave.

    A nonempty starting instance is absorbed by replaying its points in
    order of increasing distance from the source (ties: right before left),
    which pins one canonical block state per set.
    """

    def __init__(self, instance: Instance):
        _require_line(instance)
        self.source = instance.source
        self.x0 = float(instance.points[instance.source])
        self.coords: Dict[str, float] = {self.source: self.x0}
        self.right = _SideChain(self.source)
        self.left = _SideChain(self.source)
        self.published: Dict[str, float] = {self.source: 0.0}
        seed = [p for p in instance.points if p != self.source]
        seed.sort(key=lambda p: (abs(float(instance.points[p]) - self.x0),
                                 -(float(instance.points[p]) - self.x0)))
        for pid in seed:
            self.insert(pid, float(instance.points[pid]))

    @property
    def assignment(self) -> Dict[str, float]:
        return self.published

    def insert(self, pid: str, coord: float) -> Tuple[Dict[str, float], StabilityDelta]:
        coord = float(coord)
        if pid in self.coords:
            raise ValidationError(f"point id {pid!r} already present")
        for q, xq in self.coords.items():
            if abs(coord - xq) <= EPS:
                raise ValidationError(f"coordinate of {pid!r} collides with {q!r}")
        off = coord - self.x0
        side = self.right if off > 0 else self.left
        change = side.insert(abs(off), pid)
        self.coords[pid] = coord
        self.published.setdefault(pid, 0.0)
        inc = dec = 0
        if change is not None:
            cid, rng = change
            if cid == self.source:
                rng = max(self.left.head_range(), self.right.head_range())
            old = self.published[cid]
            if rng > old + EPS:
                inc = 1
            elif rng < old - EPS:
                dec = 1
            self.published[cid] = rng
        return self.published, StabilityDelta(inc, dec)

    def apply_update(self, op: str, pid: str, coord: float = None):
        if op == "insert":
            return self.insert(pid, coord)
        raise ValidationError("one-change maintainer only supports insertions")

    def check_structure(self) -> None:
        self.left.check()
        self.right.check()


# ---------------------------------------------------------------------------
# 2-stable
# ---------------------------------------------------------------------------


def standard_assignment(instance: Instance) -> Dict[str, float]:
    """Everyone reaches their successor away from the source; extreme
    points are silent and the source takes its larger side gap."""
    _require_line(instance)
    order = sorted(instance.points, key=lambda p: float(instance.points[p]))
    xs = [float(instance.points[p]) for p in order]
    isrc = order.index(instance.source)
    n = len(order)
    rho: Dict[str, float] = {}
    for t, pid in enumerate(order):
        if t > isrc:
            rho[pid] = xs[t + 1] - xs[t] if t < n - 1 else 0.0
        elif t < isrc:
            rho[pid] = xs[t] - xs[t - 1] if t > 0 else 0.0
        else:
            left = xs[t] - xs[t - 1] if t > 0 else 0.0
            right = xs[t + 1] - xs[t] if t < n - 1 else 0.0
            rho[pid] = max(left, right)
    return rho


class TwoStable:
    """Standard ranges for everyone; at most two ranges change per update
    and the cost is at most twice the optimum for any exponent."""

    def __init__(self, instance: Instance):
        _require_line(instance)
        self.instance = instance
        self.published = standard_assignment(instance)

    @property
    def assignment(self) -> Dict[str, float]:
        return self.published

    def apply_update(self, op: str, pid: str, coord: float = None):
        if op == "insert":
            self.instance = self.instance.with_insert(pid, coord)
        elif op == "delete":
            if pid == self.instance.source:
                raise ValidationError("cannot delete the source")
            self.instance = self.instance.with_delete(pid)
        else:
            raise ValidationError(f"unknown event op {op!r}")
        fresh = standard_assignment(self.instance)
        delta = assignment_diff(self.published, fresh)
        self.published = fresh
        return self.published, delta

    def insert(self, pid: str, coord: float):
        return self.apply_update("insert", pid, coord)

    def delete(self, pid: str):
        return self.apply_update("delete", pid)


# ---------------------------------------------------------------------------
# 3-stable
# ---------------------------------------------------------------------------


def default_delta() -> float:
    """Parameter minimizing the source-based cost guarantee: the root of
    6 d^3 - 3 d - 2 in (1/2, 1), found by bisection to 1e-10."""
    lo, hi = 0.5, 1.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if 6.0 * mid ** 3 - 3.0 * mid - 2.0 < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def ratio_constant(delta: float) -> float:
    """Cost guarantee of the source-based scheme at this delta (exponent 2)."""
    delta = _check_delta(delta)
    stretched = 1.0 + delta + (1.0 + 5.0 * delta) * (1.0 - delta) ** 2 / delta ** 2
    direct = 1.0 / delta ** 2 + 0.5
    return max(stretched, direct)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.5 < delta < 1.0:
        raise ValidationError(f"delta must lie strictly between 1/2 and 1, got {delta}")
    return delta


def source_based_assignment(instance: Instance, delta: float) -> Dict[str, float]:
    """From-scratch classification; the maintained version must agree."""
    _require_line(instance)
    delta = _check_delta(delta)
    order = sorted(instance.points, key=lambda p: float(instance.points[p]))
    xs = [float(instance.points[p]) for p in order]
    isrc = order.index(instance.source)
    n = len(order)
    rho: Dict[str, float] = {}
    keys: List[float] = []
    if isrc + 1 < n:
        keys.append(xs[isrc + 1] - xs[isrc])
    if isrc > 0:
        keys.append(xs[isrc] - xs[isrc - 1])
    for t, pid in enumerate(order):
        if t == isrc:
            continue
        if t > isrc:
            suc = t + 1 if t + 1 < n else None
        else:
            suc = t - 1 if t - 1 >= 0 else None
        if suc is None:
            rho[pid] = 0.0
            continue
        gap = abs(xs[suc] - xs[t])
        reach = abs(xs[suc] - xs[isrc])
        if gap > delta * reach:
            rho[pid] = 0.0
            keys.append(reach)
        else:
            rho[pid] = gap
    rho[instance.source] = max(keys) if keys else 0.0
    return rho


class ThreeStable:
    """Source-based maintainer: insertions are (2 up, 1 down)-stable,
    deletions (1 up, 2 down)-stable, cost within ratio_constant(delta) of
    the optimum at exponent 2.

    Each update reclassifies only the new point and its predecessor toward
    the source, then refreshes the source range from an ordered multiset
    of successor distances of expensive points.
    """

    def __init__(self, instance: Instance, delta: float = None):
        _require_line(instance)
        self.delta = _check_delta(default_delta() if delta is None else delta)
        self.source = instance.source
        self.coords = {p: float(c) for p, c in instance.points.items()}
        self._ids = sorted(self.coords, key=self.coords.get)
        self._xs = [self.coords[p] for p in self._ids]
        self._keys: List[float] = []
        self._expensive_key: Dict[str, float] = {}
        self.published: Dict[str, float] = {}
        for pid in self._ids:
            if pid == self.source:
                continue
            rng, key = self._classify(pid)
            self.published[pid] = rng
            if key is not None:
                insort(self._keys, key)
                self._expensive_key[pid] = key
        self.published[self.source] = self._source_range()

    @property
    def assignment(self) -> Dict[str, float]:
        return self.published

    def _pos(self, pid: str) -> int:
        t = bisect_left(self._xs, self.coords[pid])
        while self._ids[t] != pid:
            t += 1
        return t

    def _successor(self, t: int) -> Optional[int]:
        isrc = self._ids.index(self.source)
        if t > isrc:
            return t + 1 if t + 1 < len(self._ids) else None
        if t < isrc:
            return t - 1 if t - 1 >= 0 else None
        return None

    def _classify(self, pid: str) -> Tuple[float, Optional[float]]:
        """(published range, expensive key or None) for a non-source point."""
        t = self._pos(pid)
        suc = self._successor(t)
        if suc is None:
            return 0.0, None
        gap = abs(self._xs[suc] - self._xs[t])
        reach = abs(self._xs[suc] - self.coords[self.source])
        if gap > self.delta * reach:
            return 0.0, reach
        return gap, None

    def _source_range(self) -> float:
        xsrc = self.coords[self.source]
        isrc = self._ids.index(self.source)
        best = 0.0
        if isrc + 1 < len(self._ids):
            best = max(best, self._xs[isrc + 1] - xsrc)
        if isrc > 0:
            best = max(best, xsrc - self._xs[isrc - 1])
        if self._keys:
            best = max(best, self._keys[-1])
        return best

    def _drop_key(self, key: float) -> None:
        at = bisect_left(self._keys, key)
        del self._keys[at]

    def _reclassify(self, pid: str) -> None:
        old_key = self._expensive_key.pop(pid, None)
        if old_key is not None:
            self._drop_key(old_key)
        rng, key = self._classify(pid)
        self.published[pid] = rng
        if key is not None:
            insort(self._keys, key)
            self._expensive_key[pid] = key

    def insert(self, pid: str, coord: float):
        return self.apply_update("insert", pid, coord)

    def delete(self, pid: str):
        return self.apply_update("delete", pid)

    def apply_update(self, op: str, pid: str, coord: float = None):
        before = dict(self.published)
        if op == "insert":
            self._insert(pid, coord)
        elif op == "delete":
            self._delete(pid)
        else:
            raise ValidationError(f"unknown event op {op!r}")
        return self.published, assignment_diff(before, self.published)

    def _insert(self, pid: str, coord: float) -> None:
        coord = float(coord)
        if pid in self.coords:
            raise ValidationError(f"point id {pid!r} already present")
        t = bisect_left(self._xs, coord)
        for nb in (t - 1, t):
            if 0 <= nb < len(self._xs) and abs(self._xs[nb] - coord) <= EPS:
                raise ValidationError(
                    f"coordinate of {pid!r} collides with {self._ids[nb]!r}")
        self._ids.insert(t, pid)
        self._xs.insert(t, coord)
        self.coords[pid] = coord
        rng, key = self._classify(pid)
        self.published[pid] = rng
        if key is not None:
            insort(self._keys, key)
            self._expensive_key[pid] = key
        prd = self._toward_source(pid)
        if prd != self.source:
            self._reclassify(prd)
        self.published[self.source] = self._source_range()

    def _delete(self, pid: str) -> None:
        if pid == self.source:
            raise ValidationError("cannot delete the source")
        if pid not in self.coords:
            raise ValidationError(f"point id {pid!r} not present")
        prd = self._toward_source(pid)
        t = self._pos(pid)
        del self._ids[t]
        del self._xs[t]
        del self.coords[pid]
        del self.published[pid]
        old_key = self._expensive_key.pop(pid, None)
        if old_key is not None:
            self._drop_key(old_key)
        if prd != self.source:
            self._reclassify(prd)
        self.published[self.source] = self._source_range()

    def _toward_source(self, pid: str) -> str:
        """Neighbor of pid one step toward the source (maybe the source)."""
        t = self._pos(pid)
        if self.coords[pid] > self.coords[self.source]:
            return self._ids[t - 1]
        return self._ids[t + 1]
