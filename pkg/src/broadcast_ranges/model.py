"""Shared model: spaces, instances, range assignments, cost, feasibility.

Coordinates are a single float for line and circle instances (circle
positions are clockwise arc lengths from the source, in [0, perimeter)) and
an (x, y) pair for plane instances.  Every comparison of distances, costs,
or ranges in the package uses the tolerance EPS.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional, Union

EPS = 1e-9

Coord = Union[float, tuple]


class ValidationError(ValueError):
    """A structurally invalid instance, trace, assignment, or request."""


def check_alpha(alpha: float) -> float:
    """Cost exponent; anything <= 1 makes the cost model degenerate."""
    alpha = float(alpha)
    if not alpha > 1.0:
        raise ValidationError(f"cost exponent must be > 1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class Line:
    pass


@dataclass(frozen=True)
class Circle:
    perimeter: float

    def __post_init__(self):
        if not self.perimeter > 0:
            raise ValidationError(f"perimeter must be positive, got {self.perimeter}")


@dataclass(frozen=True)
class Plane:
    pass


Space = Union[Line, Circle, Plane]

_SPACE_NAMES = {Line: "line", Circle: "circle", Plane: "plane"}


def space_name(space: Space) -> str:
    return _SPACE_NAMES[type(space)]


def distance(space: Space, a: Coord, b: Coord) -> float:
    if isinstance(space, Line):
        return abs(a - b)
    if isinstance(space, Circle):
        d = abs(a - b)
        return min(d, space.perimeter - d)
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _coord_ok(space: Space, c: Coord) -> None:
    if isinstance(space, (Line, Circle)):
        if not isinstance(c, (int, float)) or not math.isfinite(c):
            raise ValidationError(f"need one finite coordinate, got {c!r}")
        if isinstance(space, Circle) and not (0 <= c < space.perimeter):
            raise ValidationError(
                f"circle position {c} outside [0, {space.perimeter})")
    else:
        if (not isinstance(c, tuple) or len(c) != 2
                or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in c)):
            raise ValidationError(f"need an (x, y) pair, got {c!r}")


@dataclass(frozen=True)
class Instance:
    """A source plus a set of placed points, pairwise distinct within EPS."""

    space: Space
    source: str
    points: Mapping[str, Coord]

    def __post_init__(self):
        if self.source not in self.points:
            raise ValidationError(f"source {self.source!r} is not a point")
        for pid, c in self.points.items():
            if not isinstance(pid, str) or not pid:
                raise ValidationError(f"point ids must be non-empty strings, got {pid!r}")
            _coord_ok(self.space, c)
        if isinstance(self.space, Circle) and abs(self.points[self.source]) > EPS:
            raise ValidationError("circle coordinates are measured from the source; "
                                  "its own position must be 0")
        self._check_distinct()

    def _check_distinct(self):
        if isinstance(self.space, Plane):
            items = list(self.points.items())
            for i in range(len(items)):
                for j in range(i + 1, len(items)):
                    if distance(self.space, items[i][1], items[j][1]) <= EPS:
                        raise ValidationError(
                            f"points {items[i][0]!r} and {items[j][0]!r} coincide")
            return
        items = sorted(self.points.items(), key=lambda kv: kv[1])
        for (ida, ca), (idb, cb) in zip(items, items[1:]):
            if abs(cb - ca) <= EPS:
                raise ValidationError(f"points {ida!r} and {idb!r} coincide")
        if isinstance(self.space, Circle) and len(items) > 1:
            wrap = self.space.perimeter - items[-1][1] + items[0][1]
            if wrap <= EPS:
                raise ValidationError(
                    f"points {items[-1][0]!r} and {items[0][0]!r} coincide across the seam")

    @property
    def n(self) -> int:
        return len(self.points)

    def dist(self, a: str, b: str) -> float:
        return distance(self.space, self.points[a], self.points[b])

    def with_insert(self, pid: str, coord: Coord) -> "Instance":
        if pid in self.points:
            raise ValidationError(f"point id {pid!r} already present")
        pts = dict(self.points)
        pts[pid] = coord
        return Instance(self.space, self.source, pts)

    def with_delete(self, pid: str) -> "Instance":
        if pid == self.source:
            raise ValidationError("the source cannot be deleted")
        if pid not in self.points:
            raise ValidationError(f"no point with id {pid!r}")
        pts = dict(self.points)
        del pts[pid]
        return Instance(self.space, self.source, pts)


@dataclass(frozen=True)
class TraceEvent:
    """One replayable update: insert carries a coordinate, delete does not."""

    op: str
    pid: str
    coord: Optional[Coord] = None

    def __post_init__(self):
        if self.op not in ("insert", "delete"):
            raise ValidationError(f"unknown event op {self.op!r}")
        if self.op == "insert" and self.coord is None:
            raise ValidationError(f"insert of {self.pid!r} lacks a coordinate")
        if self.op == "delete" and self.coord is not None:
            raise ValidationError(f"delete of {self.pid!r} carries a coordinate")


@dataclass(frozen=True)
class StabilityDelta:
    """How many ranges strictly grew / strictly shrank across one update.

    Points absent on one side of the update are treated as having range 0
    there, so a new point that comes up with a positive range counts as an
    increase and deleting a positive-range point counts as a decrease.
    """

    increased: int
    decreased: int

    @property
    def total(self) -> int:
        return self.increased + self.decreased


def cost_alpha(ranges: Mapping[str, float], alpha: float) -> float:
    """Sum of range**alpha, accumulated in sorted-id order for determinism."""
    check_alpha(alpha)
    total = 0.0
    for pid in sorted(ranges):
        r = ranges[pid]
        if r < 0:
            raise ValidationError(f"negative range {r} for {pid!r}")
        if r > 0:
            total += r ** alpha
    return total


def assignment_diff(old: Mapping[str, float], new: Mapping[str, float]) -> StabilityDelta:
    inc = dec = 0
    for pid in old.keys() | new.keys():
        a = old.get(pid, 0.0)
        b = new.get(pid, 0.0)
        if b > a + EPS:
            inc += 1
        elif b < a - EPS:
            dec += 1
    return StabilityDelta(inc, dec)


def is_feasible(instance: Instance, ranges: Mapping[str, float]) -> bool:
    """True iff every point is reachable from the source in the broadcast
    digraph with edges p -> q whenever dist(p, q) <= range(p) + EPS."""
    for pid in ranges:
        if pid not in instance.points:
            raise ValidationError(f"range given for unknown point {pid!r}")
    ids = sorted(instance.points)
    seen = {instance.source}
    queue = deque([instance.source])
    while queue:
        p = queue.popleft()
        rp = ranges.get(p, 0.0)
        if rp < 0:
            raise ValidationError(f"negative range {rp} for {p!r}")
        for q in ids:
            if q not in seen and instance.dist(p, q) <= rp + EPS:
                seen.add(q)
                queue.append(q)
    return len(seen) == len(ids)
