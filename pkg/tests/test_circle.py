"""Circle solver: cut reduction, sweep, coverage, adversarial family."""
import math
import random

import pytest

from broadcast_ranges.circle import (
    cut_map,
    find_uncovered_point,
    gen_s1_no_sas,
    no_sas_params,
    solve_optimal_s1,
)
from broadcast_ranges.model import (
    EPS,
    Circle,
    Instance,
    Line,
    TraceEvent,
    ValidationError,
    assignment_diff,
    cost_alpha,
    distance,
    is_feasible,
)
from broadcast_ranges.oracle import brute_force_cost


def _random_circle_instance(rng, max_n=6, perimeter=10.0):
    n = rng.randrange(1, max_n + 1)
    pts = {"s": 0.0}
    while len(pts) < n:
        c = round(rng.uniform(0.2, perimeter - 0.2), 3)
        if all(min(abs(c - v), perimeter - abs(c - v)) > 1e-6 for v in pts.values()):
            pts[f"p{len(pts)}"] = c
    return Instance(Circle(perimeter), "s", pts)


def test_cut_map_examples():
    inst = Instance(Circle(10.0), "s", {"s": 0.0, "a": 3.0, "b": 7.0})
    cut = cut_map(inst, 5.0)
    assert isinstance(cut.space, Line)
    assert cut.points == pytest.approx({"s": 0.0, "a": 3.0, "b": -3.0})
    cut2 = cut_map(inst, 8.0)
    assert cut2.points == pytest.approx({"s": 0.0, "a": 3.0, "b": 7.0})


def test_cut_map_rejects_cut_through_a_point():
    inst = Instance(Circle(10.0), "s", {"s": 0.0, "a": 3.0})
    for bad in (3.0, 3.0 + EPS / 4, 0.0, 10.0 - EPS / 4):
        with pytest.raises(ValidationError):
            cut_map(inst, bad)


def test_cut_distances_dominate_circle_distances():
    """Unrolling can only stretch pairs, never bring them closer, so line
    feasibility transfers back to the circle."""
    rng = random.Random(404)
    for _ in range(100):
        inst = _random_circle_instance(rng)
        ids = sorted(inst.points)
        r = rng.uniform(0, 10)
        try:
            cut = cut_map(inst, r)
        except ValidationError:
            continue
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                assert cut.dist(a, b) >= inst.dist(a, b) - 1e-12


def test_two_points_use_shorter_arc():
    inst = Instance(Circle(10.0), "s", {"s": 0.0, "a": 7.0})
    sol = solve_optimal_s1(inst, 2.0)
    assert sol.cost == pytest.approx(9.0)
    assert sol.assignment["s"] == pytest.approx(3.0)


def test_matches_oracle_and_fast_equals_slow():
    rng = random.Random(20260820)
    for trial in range(80):
        inst = _random_circle_instance(rng)
        alpha = rng.choice([1.5, 2.0, 3.0])
        fast = solve_optimal_s1(inst, alpha, fast=True)
        slow = solve_optimal_s1(inst, alpha, fast=False)
        assert fast.cost == slow.cost, trial
        assert fast.assignment == slow.assignment
        assert fast.cut_index == slow.cut_index
        assert fast.cut_costs == slow.cut_costs
        opt = brute_force_cost(inst, alpha)
        assert abs(fast.cost - opt) <= 1e-9 * max(1.0, opt), (
            trial, inst.points, alpha, fast.cost, opt)
        assert is_feasible(inst, fast.assignment)


def test_fast_equals_slow_on_larger_instances():
    rng = random.Random(11)
    for trial in range(25):
        inst = _random_circle_instance(rng, max_n=40, perimeter=50.0)
        fast = solve_optimal_s1(inst, 2.0, fast=True)
        slow = solve_optimal_s1(inst, 2.0, fast=False)
        assert fast.cost == slow.cost and fast.assignment == slow.assignment


def test_uncovered_point_witness():
    inst = Instance(Circle(10.0), "s", {"s": 0.0, "a": 4.0, "b": 6.0})
    # source covers to 1 each way; nothing else transmits: a is uncovered
    witness = find_uncovered_point(inst, {"s": 1.0})
    assert witness is not None
    covered = min(abs(witness - 0.0), 10.0 - abs(witness)) <= 1.0 + EPS
    assert not covered
    # the gap between a's and b's reach pins the witness
    w = find_uncovered_point(inst, {"s": 4.0, "a": 1.0})
    assert w == pytest.approx(5.5)
    # full cover: no witness
    assert find_uncovered_point(inst, {"s": 4.0, "a": 1.0, "b": 1.0}) is None
    # a single range >= half the perimeter ends the search immediately
    assert find_uncovered_point(inst, {"s": 5.0}) is None


def test_uncovered_point_fuzz_against_dense_sampling():
    rng = random.Random(606)
    for trial in range(60):
        inst = _random_circle_instance(rng)
        ranges = {pid: rng.choice([0.0, rng.uniform(0, 2.5)])
                  for pid in inst.points}
        witness = find_uncovered_point(inst, ranges)
        L = inst.space.perimeter

        def covered(x):
            return any(distance(inst.space, x, c) <= ranges.get(pid, 0.0) + EPS
                       for pid, c in inst.points.items())

        if witness is None:
            misses = [x for x in (i * L / 400.0 for i in range(400))
                      if not covered(x)]
            # sampled gaps can only be hairline slivers of width ~EPS
            assert not misses or all(
                covered(x - L / 800.0) or covered(x + L / 800.0) for x in misses)
        else:
            assert not covered(witness), (trial, witness)


def test_no_sas_family_layout_and_costs():
    for n in (4, 10):
        params = no_sas_params(n, 2.0)
        inst, event = gen_s1_no_sas(n, 2.0)
        assert isinstance(inst.space, Circle)
        assert inst.space.perimeter == pytest.approx(params.perimeter)
        assert event.op == "insert" and event.pid == "q"
        # gaps after the big initial one alternate 2, 1
        pos = sorted(inst.points.values())
        gaps = [b - a for a, b in zip(pos, pos[1:])]
        assert gaps[0] == pytest.approx(params.delta)
        for i, g in enumerate(gaps[1:]):
            assert g == pytest.approx(2.0 if i % 2 == 0 else 1.0)
        opt_before = solve_optimal_s1(inst, 2.0).cost
        assert opt_before == pytest.approx(10.0 * n)
        after = inst.with_insert(event.pid, event.coord)
        opt_after = solve_optimal_s1(after, 2.0).cost
        assert opt_after == pytest.approx(8.75 * n)


def test_no_sas_family_forces_wide_reassignment():
    """Inserting the pending point moves a positive fraction of all ranges:
    no k-stable scheme with small k can track the optimum here."""
    n = 30
    inst, event = gen_s1_no_sas(n, 2.0)
    before = solve_optimal_s1(inst, 2.0).assignment
    after_inst = inst.with_insert(event.pid, event.coord)
    after = solve_optimal_s1(after_inst, 2.0).assignment
    moved = assignment_diff(before, after)
    assert moved.total >= 2 * n // 3 - 1, moved
    assert cost_alpha(after, 2.0) == pytest.approx(8.75 * n)


def test_generator_validation():
    with pytest.raises(ValidationError):
        gen_s1_no_sas(0)
    with pytest.raises(ValidationError):
        no_sas_params(-3, 2.0)


def test_solver_rejects_non_circle():
    with pytest.raises(ValidationError):
        solve_optimal_s1(Instance(Line(), "s", {"s": 0.0}), 2.0)


def test_single_point_circle():
    inst = Instance(Circle(5.0), "s", {"s": 0.0})
    sol = solve_optimal_s1(inst, 2.0)
    assert sol.assignment == {"s": 0.0}
    assert sol.cost == 0.0
    assert math.isfinite(sol.cost)
