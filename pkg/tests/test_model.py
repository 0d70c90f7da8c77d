"""Shared model: spaces, validation, cost, diffs, feasibility."""
import math
import random

import pytest

from broadcast_ranges.model import (
    EPS,
    Circle,
    Instance,
    Line,
    Plane,
    StabilityDelta,
    TraceEvent,
    ValidationError,
    assignment_diff,
    check_alpha,
    cost_alpha,
    distance,
    is_feasible,
    space_name,
)


def test_check_alpha_rejects_degenerate_exponents():
    assert check_alpha(2) == 2.0
    assert check_alpha(1.0001) == 1.0001
    for bad in (1.0, 0.5, 0.0, -3.0):
        with pytest.raises(ValidationError):
            check_alpha(bad)


def test_distance_per_space():
    assert distance(Line(), -1.0, 3.5) == 4.5
    # circle distance is the shorter arc
    c = Circle(10.0)
    assert distance(c, 1.0, 9.0) == 2.0
    assert distance(c, 1.0, 4.0) == 3.0
    assert distance(Plane(), (0.0, 0.0), (3.0, 4.0)) == 5.0


def test_space_names():
    assert space_name(Line()) == "line"
    assert space_name(Circle(1.0)) == "circle"
    assert space_name(Plane()) == "plane"


def test_instance_validation():
    with pytest.raises(ValidationError):
        Instance(Line(), "s", {"a": 0.0})  # source not a point
    with pytest.raises(ValidationError):
        Instance(Line(), "s", {"s": 0.0, "a": EPS / 2})  # coincident
    with pytest.raises(ValidationError):
        Instance(Line(), "s", {"s": float("nan")})
    with pytest.raises(ValidationError):
        Circle(0.0)
    with pytest.raises(ValidationError):
        Instance(Circle(10.0), "s", {"s": 0.0, "a": 10.0})  # out of range
    with pytest.raises(ValidationError):
        Instance(Circle(10.0), "s", {"s": 1.0, "a": 2.0})  # source must sit at 0
    # coincidence across the circle seam
    with pytest.raises(ValidationError):
        Instance(Circle(10.0), "s", {"s": 0.0, "a": 10.0 - EPS / 4})
    with pytest.raises(ValidationError):
        Instance(Plane(), "s", {"s": (0.0, 0.0), "a": (0.0, EPS / 2)})
    with pytest.raises(ValidationError):
        Instance(Plane(), "s", {"s": (0.0,)})
    with pytest.raises(ValidationError):
        Instance(Line(), "", {"": 0.0})


def test_insert_delete_copies():
    inst = Instance(Line(), "s", {"s": 0.0, "a": 1.0})
    grown = inst.with_insert("b", -2.0)
    assert grown.n == 3 and inst.n == 2
    with pytest.raises(ValidationError):
        inst.with_insert("a", 5.0)
    shrunk = grown.with_delete("a")
    assert sorted(shrunk.points) == ["b", "s"]
    with pytest.raises(ValidationError):
        inst.with_delete("s")
    with pytest.raises(ValidationError):
        inst.with_delete("zzz")


def test_trace_event_shape():
    TraceEvent("insert", "a", 1.0)
    TraceEvent("delete", "a")
    with pytest.raises(ValidationError):
        TraceEvent("move", "a", 1.0)
    with pytest.raises(ValidationError):
        TraceEvent("insert", "a")
    with pytest.raises(ValidationError):
        TraceEvent("delete", "a", 1.0)


def test_cost_alpha_basics():
    assert cost_alpha({}, 2.0) == 0.0
    assert cost_alpha({"a": 0.0}, 2.0) == 0.0
    assert cost_alpha({"a": 2.0, "b": 3.0}, 2.0) == 13.0
    assert cost_alpha({"a": 4.0}, 1.5) == 8.0
    with pytest.raises(ValidationError):
        cost_alpha({"a": -1.0}, 2.0)
    with pytest.raises(ValidationError):
        cost_alpha({"a": 1.0}, 1.0)


def test_cost_alpha_order_independent():
    """Accumulation is pinned to sorted-id order, so permuting the dict
    cannot move the float result at all."""
    rng = random.Random(7)
    for _ in range(50):
        items = [(f"p{i}", rng.uniform(0, 3)) for i in range(12)]
        base = cost_alpha(dict(items), 2.5)
        rng.shuffle(items)
        assert cost_alpha(dict(items), 2.5) == base


def test_assignment_diff_counts_and_band():
    d = assignment_diff({"a": 1.0, "b": 2.0}, {"a": 1.5, "b": 1.0})
    assert (d.increased, d.decreased, d.total) == (1, 1, 2)
    # within-EPS moves are not changes
    d = assignment_diff({"a": 1.0}, {"a": 1.0 + EPS / 2})
    assert d.total == 0
    # absent points count as range 0 on that side
    d = assignment_diff({}, {"a": 0.5})
    assert (d.increased, d.decreased) == (1, 0)
    d = assignment_diff({"a": 0.5}, {})
    assert (d.increased, d.decreased) == (0, 1)
    d = assignment_diff({"a": 0.0}, {})
    assert d.total == 0
    assert StabilityDelta(2, 3).total == 5


def test_is_feasible_small_cases():
    inst = Instance(Line(), "s", {"s": 0.0, "a": 1.0, "b": 2.0})
    assert is_feasible(inst, {"s": 1.0, "a": 1.0})
    assert is_feasible(inst, {"s": 2.0})
    assert not is_feasible(inst, {"s": 1.0})
    assert not is_feasible(inst, {"s": 0.5, "a": 5.0})
    # tolerance: reaching within EPS counts
    assert is_feasible(inst, {"s": 2.0 - EPS / 2})
    with pytest.raises(ValidationError):
        is_feasible(inst, {"ghost": 1.0})
    with pytest.raises(ValidationError):
        is_feasible(inst, {"s": -0.5})


def test_is_feasible_uses_shorter_arc():
    inst = Instance(Circle(10.0), "s", {"s": 0.0, "a": 9.0})
    assert is_feasible(inst, {"s": 1.0})


def test_is_feasible_fuzz_matches_direct_reachability():
    """Cross-check the BFS against a dense transitive closure."""
    rng = random.Random(42)
    for trial in range(120):
        n = rng.randrange(1, 7)
        pts = {"s": 0.0}
        while len(pts) < n:
            c = round(rng.uniform(-3, 3), 3)
            if all(abs(c - v) > 1e-6 for v in pts.values()):
                pts[f"p{len(pts)}"] = c
        inst = Instance(Line(), "s", pts)
        ranges = {pid: rng.choice([0.0, rng.uniform(0, 2)]) for pid in pts}

        reached = {"s"}
        grew = True
        while grew:
            grew = False
            for p in list(reached):
                for q in pts:
                    if q not in reached and inst.dist(p, q) <= ranges[p] + EPS:
                        reached.add(q)
                        grew = True
        assert is_feasible(inst, ranges) == (len(reached) == len(pts))
