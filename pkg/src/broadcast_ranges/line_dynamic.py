"""Maintained line optimum under point insertions and deletions.

One augmented search tree per point p* stores that point's candidate ranges
as keys; the stored value of a key lam, corrected by the additive lazy
terms on its root path, always equals the bookkeeping cost of turning at p*
with range lam on the current point set.  An update touches every tree with
O(1) interval corrections, derived from how the inserted/deleted point q
changes chain segments:

  * q strictly between the source and p*: one chain edge splits (or fuses),
    shifting every candidate's cost by the same amount;
  * otherwise, with prd/suc being q's neighbors toward/away from the source
    on its own side, candidates split into three bands: reaches past suc(q)
    (no change), reaches q but not suc(q) (outward chain now starts at q),
    reaches neither (q joins the outward chain).

Each tree is a treap whose priorities are a fixed hash of the key's bit
pattern, so its shape is a pure function of the key set; lazy corrections
are pushed down before any structural change.  The reported optimum is
re-evaluated directly from a shortlist of near-minimal candidates, with the
same evaluator and tie-break as the from-scratch solver, so the maintained
answer is identical to a fresh solve at every step.
"""
from __future__ import annotations

import struct
from bisect import bisect_left, insort
from typing import Optional

import numpy as np

from .line import (
    BAND,
    SLACK,
    Axis,
    StructuredSolution,
    build_axis,
    build_axis_from_sorted,
    candidate_cost,
    candidate_costs,
    candidate_ranges,
    materialize,
    select_band,
)
from .model import EPS, Instance, Line, ValidationError, check_alpha

_M64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def _priority(key: float) -> int:
    return _splitmix64(struct.unpack("<Q", struct.pack("<d", key))[0])


class _Node:
    __slots__ = ("key", "val", "cnt", "lazy", "mn", "br", "pri", "l", "r")

    def __init__(self, key: float, val: float, cnt: int):
        self.key = key
        self.val = val      # stored cost; true cost adds root-path lazies
        self.cnt = cnt      # points at this candidate distance
        self.lazy = 0.0     # pending correction for the whole subtree
        self.mn = val       # min true cost in subtree, relative to parent
        self.br = key       # key attaining mn
        self.pri = _priority(key)
        self.l = None
        self.r = None


def _push(x: _Node) -> None:
    if x.lazy:
        t = x.lazy
        x.val += t
        if x.l is not None:
            x.l.lazy += t
            x.l.mn += t
        if x.r is not None:
            x.r.lazy += t
            x.r.mn += t
        x.lazy = 0.0


def _pull(x: _Node) -> None:
    best, bkey = (x.l.mn, x.l.br) if x.l is not None else (x.val, x.key)
    if x.l is not None and x.val < best:
        best, bkey = x.val, x.key
    if x.r is not None and x.r.mn < best:
        best, bkey = x.r.mn, x.r.br
    x.mn = best + x.lazy
    x.br = bkey


def _split_lt(x: Optional[_Node], key: float, ops: list):
    """(keys < key, keys >= key); corrections are pushed along the path."""
    if x is None:
        return None, None
    ops[0] += 1
    _push(x)
    if x.key < key:
        a, b = _split_lt(x.r, key, ops)
        x.r = a
        _pull(x)
        return x, b
    a, b = _split_lt(x.l, key, ops)
    x.l = b
    _pull(x)
    return a, x


def _split_leq(x: Optional[_Node], key: float, ops: list):
    if x is None:
        return None, None
    ops[0] += 1
    _push(x)
    if x.key <= key:
        a, b = _split_leq(x.r, key, ops)
        x.r = a
        _pull(x)
        return x, b
    a, b = _split_leq(x.l, key, ops)
    x.l = b
    _pull(x)
    return a, x


def _merge(a: Optional[_Node], b: Optional[_Node], ops: list) -> Optional[_Node]:
    if a is None:
        return b
    if b is None:
        return a
    ops[0] += 1
    if a.pri >= b.pri:
        _push(a)
        a.r = _merge(a.r, b, ops)
        _pull(a)
        return a
    _push(b)
    b.l = _merge(a, b.l, ops)
    _pull(b)
    return b


class AugTree:
    """Candidate ranges of one turning point with range-add / min / argmin."""

    __slots__ = ("root", "ops")

    def __init__(self, ops: list):
        self.root = None
        self.ops = ops

    def build_sorted(self, keys, vals, cnts) -> None:
        """Bulk build from ascending keys; same shape as repeated inserts."""
        stack = []
        for k, v, c in zip(keys, vals, cnts):
            node = _Node(float(k), float(v), int(c))
            last = None
            while stack and stack[-1].pri < node.pri:
                last = stack.pop()
            node.l = last
            if stack:
                stack[-1].r = node
            stack.append(node)
        self.root = stack[0] if stack else None

        def rebuild(x):
            if x is None:
                return
            rebuild(x.l)
            rebuild(x.r)
            _pull(x)

        rebuild(self.root)

    def add_all(self, delta: float) -> None:
        if self.root is not None and delta != 0.0:
            self.root.lazy += delta
            self.root.mn += delta

    def add_below(self, hi: float, delta: float) -> None:
        """Add delta to every candidate with key < hi."""
        if self.root is None or delta == 0.0:
            return
        a, b = _split_lt(self.root, hi, self.ops)
        if a is not None:
            a.lazy += delta
            a.mn += delta
        self.root = _merge(a, b, self.ops)

    def range_add(self, lo: float, hi: float, delta: float) -> None:
        """Add delta to every candidate with lo <= key < hi."""
        if self.root is None or delta == 0.0:
            return
        a, rest = _split_lt(self.root, lo, self.ops)
        b, c = _split_lt(rest, hi, self.ops)
        if b is not None:
            b.lazy += delta
            b.mn += delta
        self.root = _merge(a, _merge(b, c, self.ops), self.ops)

    def insert(self, key: float, val: float) -> None:
        x = self.root
        while x is not None:
            self.ops[0] += 1
            if key == x.key:
                x.cnt += 1     # cnt is not aggregated, no push needed
                return
            x = x.l if key < x.key else x.r
        a, b = _split_lt(self.root, key, self.ops)
        self.root = _merge(a, _merge(_Node(key, val, 1), b, self.ops), self.ops)

    def remove(self, key: float) -> None:
        x = self.root
        while x is not None:
            self.ops[0] += 1
            if key == x.key:
                if x.cnt > 1:
                    x.cnt -= 1
                    return
                break
            x = x.l if key < x.key else x.r
        if x is None:
            raise AssertionError(f"candidate {key} missing from tree")
        a, b = _split_lt(self.root, key, self.ops)
        gone, c = _split_leq(b, key, self.ops)
        assert gone is not None and gone.l is None and gone.r is None
        self.root = _merge(a, c, self.ops)

    @property
    def min_cost(self) -> float:
        return self.root.mn if self.root is not None else float("inf")

    def collect_near(self, threshold: float) -> list:
        """(key, true cost) of every candidate with true cost <= threshold."""
        out = []

        def rec(x, acc):
            if x is None:
                return
            self.ops[0] += 1
            if acc + x.mn > threshold:
                return
            t = acc + x.lazy
            rec(x.l, t)
            if t + x.val <= threshold:
                out.append((x.key, t + x.val))
            rec(x.r, t)

        rec(self.root, 0.0)
        return out

    def entries(self) -> list:
        """All (key, true cost, count), ascending by key."""
        out = []

        def rec(x, acc):
            if x is None:
                return
            t = acc + x.lazy
            rec(x.l, t)
            out.append((x.key, t + x.val, x.cnt))
            rec(x.r, t)

        rec(self.root, 0.0)
        return out

    def check_shape(self, tol: float) -> None:
        """Structural audit: key order, heap order, aggregate consistency."""

        def rec(x, acc):
            if x is None:
                return float("inf"), None
            t = acc + x.lazy
            lmn, _ = rec(x.l, t)
            rmn, _ = rec(x.r, t)
            if x.l is not None and not (x.l.key < x.key and x.l.pri <= x.pri):
                raise AssertionError("treap order violated")
            if x.r is not None and not (x.r.key > x.key and x.r.pri <= x.pri):
                raise AssertionError("treap order violated")
            true_mn = min(lmn, t + x.val, rmn)
            if abs((acc + x.mn) - true_mn) > tol:
                raise AssertionError("stale subtree minimum")
            return true_mn, None

        rec(self.root, 0.0)


class DynamicOptimum:
    """Exact maintained optimum for one line instance.

    insert/delete cost O(n log n) tree-node touches (every tree takes O(1)
    interval corrections, the new point's own tree is rebuilt); the
    reported optimum re-evaluates a shortlist of near-minimal candidates so
    it matches solve_optimal_r1 bit for bit, including tie-breaks.
    """

    def __init__(self, instance: Instance, alpha: float):
        if not isinstance(instance.space, Line):
            raise ValidationError("dynamic line structure fed a non-line instance")
        self.alpha = check_alpha(alpha)
        self.source = instance.source
        self.coords = {pid: float(c) for pid, c in instance.points.items()}
        order = sorted(self.coords, key=self.coords.get)
        self._ids = order
        self._xs = [self.coords[pid] for pid in order]
        self.ops = [0]
        self._rebuild_axis()
        self.trees = {}
        for pid in order:
            self.trees[pid] = self._fresh_tree(self._index[pid])
        self._cache = None

    # -- bookkeeping helpers -------------------------------------------------

    def _rebuild_axis(self) -> None:
        isrc = self._ids.index(self.source)
        self.axis = build_axis_from_sorted(self._ids, self._xs, isrc, self.alpha)
        self._index = {pid: t for t, pid in enumerate(self._ids)}

    def _fresh_tree(self, ip: int) -> AugTree:
        tree = AugTree(self.ops)
        lams, cnts = candidate_ranges(self.axis, ip, counts=True)
        if len(lams):
            tree.build_sorted(lams, candidate_costs(self.axis, ip, lams), cnts)
        return tree

    @property
    def n(self) -> int:
        return len(self._ids)

    def point_ids(self):
        return list(self._ids)

    # -- updates -------------------------------------------------------------

    def insert(self, pid: str, coord: float) -> None:
        coord = float(coord)
        if pid in self.coords:
            raise ValidationError(f"point id {pid!r} already present")
        pos = bisect_left(self._xs, coord)
        for nb in (pos - 1, pos):
            if 0 <= nb < len(self._xs) and abs(self._xs[nb] - coord) <= EPS:
                raise ValidationError(f"coordinate {coord} coincides with {self._ids[nb]!r}")
        left_nb = self._xs[pos - 1] if pos > 0 else None
        right_nb = self._xs[pos] if pos < len(self._xs) else None
        self._apply_cross_updates(coord, left_nb, right_nb, sign=1.0)

        insort(self._xs, coord)
        self._ids.insert(bisect_left(self._xs, coord), pid)
        self.coords[pid] = coord
        self._rebuild_axis()

        xsrc = self.coords[self.source]
        for owner, tree in self.trees.items():
            xp = self.coords[owner]
            d = abs(coord - xp)
            if owner == self.source or d > abs(xp - xsrc):
                tree.insert(d, candidate_cost(self.axis, self._index[owner], d))
        self.trees[pid] = self._fresh_tree(self._index[pid])
        self._cache = None

    def delete(self, pid: str) -> None:
        if pid == self.source:
            raise ValidationError("the source cannot be deleted")
        if pid not in self.coords:
            raise ValidationError(f"no point with id {pid!r}")
        coord = self.coords[pid]
        i = self._index[pid]
        left_nb = self._xs[i - 1] if i > 0 else None
        right_nb = self._xs[i + 1] if i < len(self._xs) - 1 else None
        xsrc = self.coords[self.source]
        del self.trees[pid]
        self._apply_cross_updates(coord, left_nb, right_nb, sign=-1.0)
        for owner, tree in self.trees.items():
            xp = self.coords[owner]
            d = abs(coord - xp)
            if owner == self.source or d > abs(xp - xsrc):
                tree.remove(d)

        del self._ids[i]
        del self._xs[i]
        del self.coords[pid]
        self._rebuild_axis()
        self._cache = None

    def _apply_cross_updates(self, coord, left_nb, right_nb, sign) -> None:
        """Interval corrections on every tree for inserting (sign=+1) or
        deleting (sign=-1) a point at `coord` whose line neighbors in the
        surrounding set are left_nb/right_nb."""
        alpha = self.alpha
        xsrc = self.coords[self.source]
        for owner, tree in self.trees.items():
            xp = self.coords[owner]
            if xsrc < coord < xp or xp < coord < xsrc:
                a, b = left_nb, right_nb    # both exist: s and p* bracket q
                tree.add_all(sign * ((coord - a) ** alpha + (b - coord) ** alpha
                                     - (b - a) ** alpha))
                continue
            if coord > xsrc:
                a, b = left_nb, right_nb    # away from the source is rightward
            else:
                a, b = right_nb, left_nb
            dq = abs(coord - xp)
            if b is None:
                tree.add_below(dq, sign * abs(coord - a) ** alpha)
            else:
                g_ab = abs(a - b) ** alpha
                g_qb = abs(coord - b) ** alpha
                dsuc = abs(b - xp)
                tree.range_add(dq, dsuc, sign * (g_qb - g_ab))
                tree.add_below(dq, sign * (abs(a - coord) ** alpha + g_qb - g_ab))

    def apply_update(self, op: str, pid: str, coord: float = None) -> StructuredSolution:
        if op == "insert":
            self.insert(pid, coord)
        elif op == "delete":
            self.delete(pid)
        else:
            raise ValidationError(f"unknown update {op!r}")
        return self.current_optimum()

    # -- queries -------------------------------------------------------------

    def current_optimum(self) -> StructuredSolution:
        if self._cache is not None:
            return self._cache
        if self.n == 1:
            sol = StructuredSolution({self.source: 0.0}, self.source, 0.0, 0.0, (), ())
            self._cache = sol
            return sol
        best_mn = min(t.min_cost for t in self.trees.values())
        threshold = best_mn + SLACK * (1 + abs(best_mn))
        xsrc = self.coords[self.source]
        entries = []
        for owner, tree in self.trees.items():
            if tree.min_cost > threshold:
                continue
            ip = self._index[owner]
            xp = self.coords[owner]
            for lam, _ in tree.collect_near(threshold):
                entries.append((candidate_cost(self.axis, ip, lam),
                                abs(xp - xsrc), lam, xp, ip))
        cost, _, lam, _, ip = select_band(entries, BAND)
        sol = materialize(self.axis, ip, lam)
        sol.cost = cost
        self._cache = sol
        return sol

    # -- verification --------------------------------------------------------

    def audit(self, tol: float = 1e-7) -> None:
        """From-scratch re-check of every stored candidate cost, the
        candidate key sets, and each tree's structural invariants."""
        for t in range(1, len(self._xs)):
            if not self._xs[t] > self._xs[t - 1]:
                raise AssertionError("global order corrupted")
        for owner, tree in self.trees.items():
            ip = self._index[owner]
            lams, cnts = candidate_ranges(self.axis, ip, counts=True)
            stored = tree.entries()
            if [e[0] for e in stored] != [float(v) for v in lams]:
                raise AssertionError(f"candidate keys of {owner!r} diverged")
            if [e[2] for e in stored] != [int(c) for c in cnts]:
                raise AssertionError(f"candidate multiplicities of {owner!r} diverged")
            for key, true_val, _ in stored:
                direct = candidate_cost(self.axis, ip, key)
                if abs(true_val - direct) > tol:
                    raise AssertionError(
                        f"stored cost for ({owner!r}, {key}) drifted: "
                        f"{true_val} vs {direct}")
            tree.check_shape(tol)
