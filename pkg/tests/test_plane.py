"""Tree-based planar maintenance: persistence, locality, cost envelope."""
import math
import random
import warnings

import pytest

from broadcast_ranges.model import (
    Instance,
    Plane,
    TraceEvent,
    ValidationError,
    assignment_diff,
    cost_alpha,
    is_feasible,
)
from broadcast_ranges.oracle import brute_force_cost
from broadcast_ranges.plane import (
    build_mst,
    degree_ok,
    delete_persistence_ok,
    fresh_mst_weight,
    gen_r2_no_sas,
    insert_locality_ok,
    mst_range_assignment,
    mst_update,
    opt_lower_bound_r2,
)


def _random_plane_instance(rng, n, scale=1.0):
    pts = {"s": (0.0, 0.0)}
    while len(pts) < n:
        c = (round(rng.uniform(-scale, scale), 4), round(rng.uniform(-scale, scale), 4))
        if all((c[0] - v[0]) ** 2 + (c[1] - v[1]) ** 2 > 1e-10 for v in pts.values()):
            pts[f"p{len(pts)}"] = c
    return Instance(Plane(), "s", pts)


def test_chain_and_square():
    inst = Instance(Plane(), "s", {"s": (0.0, 0.0), "a": (1.0, 0.0), "b": (2.0, 0.0)})
    tree = build_mst(inst)
    assert tree.weight() == pytest.approx(2.0)
    assert set(tree.edges) == {("a", "b"), ("a", "s")}
    sq = Instance(Plane(), "s", {"s": (0.0, 0.0), "a": (1.0, 0.0),
                                 "b": (0.0, 1.0), "c": (1.0, 1.0)})
    t2 = build_mst(sq)
    assert t2.weight() == pytest.approx(3.0)
    t2.check_tree()


def test_singleton_tree():
    tree = build_mst(Instance(Plane(), "s", {"s": (0.5, 0.5)}))
    assert tree.edges == ()
    assert mst_range_assignment(tree) == {"s": 0.0}
    assert opt_lower_bound_r2(tree, 2.0) == 0.0


def test_range_assignment_is_max_incident_edge():
    inst = Instance(Plane(), "s", {"s": (0.0, 0.0), "a": (1.0, 0.0), "b": (3.0, 0.0)})
    tree = build_mst(inst)
    ranges = mst_range_assignment(tree)
    assert ranges == pytest.approx({"s": 1.0, "a": 2.0, "b": 2.0})
    assert is_feasible(inst, ranges)
    assert cost_alpha(ranges, 2.0) <= 2.0 * tree.power_weight(2.0) + 1e-12


def test_lower_bound_needs_alpha_at_least_two():
    tree = build_mst(Instance(Plane(), "s", {"s": (0.0, 0.0), "a": (1.0, 0.0)}))
    assert opt_lower_bound_r2(tree, 2.0) == pytest.approx(1.0 / 6.0)
    with pytest.raises(ValidationError):
        opt_lower_bound_r2(tree, 1.5)


def test_update_stream_invariants():
    """Persistence under deletions, locality under insertions, bounded
    degree, and agreement with a preference-free rebuild, along a long
    mixed stream."""
    rng = random.Random(90210)
    inst = _random_plane_instance(rng, 12)
    tree = build_mst(inst)
    live = dict(inst.points)
    serial = 0
    for step in range(200):
        if len(live) > 4 and rng.random() < 0.4:
            pid = rng.choice(sorted(p for p in live if p != "s"))
            new = mst_update(tree, TraceEvent("delete", pid))
            assert delete_persistence_ok(tree, new, pid), step
            del live[pid]
        else:
            serial += 1
            while True:
                c = (round(rng.uniform(-1, 1), 4), round(rng.uniform(-1, 1), 4))
                if all((c[0] - v[0]) ** 2 + (c[1] - v[1]) ** 2 > 1e-10
                       for v in live.values()):
                    break
            pid = f"q{serial}"
            new = mst_update(tree, TraceEvent("insert", pid, c))
            assert insert_locality_ok(tree, new, pid), step
            live[pid] = c
        old_ranges = mst_range_assignment(tree)
        tree = new
        tree.check_tree()
        assert degree_ok(tree)
        assert tree.weight() == pytest.approx(fresh_mst_weight(dict(live)), abs=1e-9)
        ranges = mst_range_assignment(tree)
        assert is_feasible(Instance(Plane(), "s", dict(live)), ranges)
        d = assignment_diff(old_ranges, ranges)
        assert (d.increased <= 7 and d.decreased <= 10) or \
               (d.increased <= 10 and d.decreased <= 7), (step, d)


def test_update_validation():
    inst = _random_plane_instance(random.Random(3), 5)
    tree = build_mst(inst)
    with pytest.raises(ValidationError):
        mst_update(tree, TraceEvent("insert", "s", (9.0, 9.0)))
    with pytest.raises(ValidationError):
        mst_update(tree, TraceEvent("delete", "s"))
    with pytest.raises(ValidationError):
        mst_update(tree, TraceEvent("delete", "ghost"))
    coords = dict(inst.points)
    some = coords["p1"]
    with pytest.raises(ValidationError):
        mst_update(tree, TraceEvent("insert", "clone", some))


def test_cost_within_constant_of_optimum():
    """alpha = 2: tree ranges pay at most 12x the true optimum, and the
    power-weight/6 bound really is a lower bound."""
    rng = random.Random(55)
    for trial in range(60):
        inst = _random_plane_instance(rng, rng.randrange(2, 8))
        tree = build_mst(inst)
        ranges = mst_range_assignment(tree)
        opt = brute_force_cost(inst, 2.0)
        assert cost_alpha(ranges, 2.0) <= 12.0 * opt + 1e-9, trial
        assert opt_lower_bound_r2(tree, 2.0) <= opt + 1e-9, trial


def test_degree_warning_outside_general_position():
    """A 7-star with repeated pairwise distances is not general position:
    the degree audit warns instead of asserting."""
    pts = {"s": (0.0, 0.0)}
    for i in range(7):
        ang = 2.0 * math.pi * i / 7.0
        pts[f"p{i}"] = (math.cos(ang), math.sin(ang))
    tree = build_mst(Instance(Plane(), "s", pts))
    if max(tree.degrees().values()) > 6:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            assert degree_ok(tree) is False
        assert caught


def test_no_sas_plane_family():
    for n in (4, 8):
        inst, event = gen_r2_no_sas(n)
        assert isinstance(inst.space, Plane)
        assert event.op == "insert" and event.pid == "q"
        tree = build_mst(inst)
        tree.check_tree()
        new = mst_update(tree, event)
        moved = assignment_diff(mst_range_assignment(tree),
                                mst_range_assignment(new))
        # reassignment spreads: the insertion reshapes a long stretch
        assert moved.total >= 1
        assert is_feasible(
            Instance(Plane(), "s",
                     dict(inst.points, **{event.pid: event.coord})),
            mst_range_assignment(new))
