"""Trace replay: run one algorithm over a stream of updates and report
per-step cost, ratio against a reference, and churn.

The reference is exact where an exact maintainer exists (line: the dynamic
optimum; circle: a per-step unrolling solve) and a certified lower bound on
the plane (tree power weight / 6, needing exponent >= 2).  Replays are
deterministic: identical (instance, trace, algorithm, alpha, seed) inputs
produce identical reports, with wall-clock timing zeroed unless explicitly
requested.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .circle import solve_optimal_s1
from .line_dynamic import DynamicOptimum
from .model import (
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
    is_feasible,
    space_name,
)
from .plane import Mst, build_mst, mst_range_assignment, mst_update, opt_lower_bound_r2
from .sas import StableApproximation, stability_param
from .stable import OneStable, ThreeStable, TwoStable


@dataclass(frozen=True)
class Trace:
    """Ordered updates to replay against a starting instance."""

    events: Tuple[TraceEvent, ...]

    def __post_init__(self):
        for ev in self.events:
            if not isinstance(ev, TraceEvent):
                raise ValidationError(f"trace entries must be events, got {ev!r}")

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)


@dataclass(frozen=True)
class StepReport:
    """Metrics after one replayed event."""

    step: int
    event: str
    alg_cost: float
    ref_cost: float
    ratio: float
    increased: int
    decreased: int
    ms: float


@dataclass(frozen=True)
class AlgorithmSpec:
    """Parsed --alg value: a kind plus its optional parameter."""

    kind: str
    k: Optional[int] = None
    eps: Optional[float] = None
    delta: Optional[float] = None

    def label(self) -> str:
        if self.kind == "sas":
            return f"sas:k={self.k}" if self.k is not None else f"sas:eps={self.eps}"
        if self.kind == "three-stable" and self.delta is not None:
            return f"three-stable:delta={self.delta}"
        return self.kind


_KINDS = ("opt-dynamic", "sas", "one-stable", "two-stable", "three-stable", "mst")


def parse_algorithm(text: str) -> AlgorithmSpec:
    """Accepts e.g. "opt-dynamic", "sas:8", "sas:k=8", "sas:eps=0.5",
    "three-stable", "three-stable:0.93", "three-stable:delta=0.93", "mst"."""
    name, _, param = str(text).partition(":")
    name = name.strip()
    param = param.strip()
    if name not in _KINDS:
        raise ValidationError(f"unknown algorithm {name!r}; pick one of {', '.join(_KINDS)}")
    if name == "sas":
        if not param:
            raise ValidationError("sas needs a parameter: sas:<k>, sas:k=<k>, or sas:eps=<eps>")
        key, _, value = param.rpartition("=")
        key = key.strip() or None
        value = value.strip()
        try:
            if key == "k":
                return AlgorithmSpec("sas", k=int(value))
            if key == "eps":
                return AlgorithmSpec("sas", eps=float(value))
            if key is None:
                try:
                    return AlgorithmSpec("sas", k=int(value))
                except ValueError:
                    return AlgorithmSpec("sas", eps=float(value))
        except ValueError:
            pass
        raise ValidationError(f"cannot parse sas parameter {param!r}")
    if name == "three-stable":
        if not param:
            return AlgorithmSpec("three-stable")
        key, _, value = param.rpartition("=")
        key = key.strip() or None
        if key not in (None, "delta"):
            raise ValidationError(f"cannot parse three-stable parameter {param!r}")
        try:
            return AlgorithmSpec("three-stable", delta=float(value.strip()))
        except ValueError:
            raise ValidationError(f"cannot parse three-stable parameter {param!r}")
    if param:
        raise ValidationError(f"algorithm {name!r} takes no parameter, got {param!r}")
    return AlgorithmSpec(name)


def advertised_change_bound(spec: AlgorithmSpec, alpha: float) -> Optional[int]:
    """Per-update total-change cap each algorithm promises; None if none."""
    if spec.kind == "one-stable":
        return 1
    if spec.kind == "two-stable":
        return 2
    if spec.kind == "three-stable":
        return 3
    if spec.kind == "sas":
        k = spec.k if spec.k is not None else stability_param(spec.eps, alpha)
        return 2 * k + 6
    if spec.kind == "mst":
        return 17
    return None


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------


class _LineOptRunner:
    def __init__(self, instance, alpha, spec):
        self.dyn = DynamicOptimum(instance, alpha)

    def assignment(self):
        return self.dyn.current_optimum().assignment

    def step(self, ev: TraceEvent):
        self.dyn.apply_update(ev.op, ev.pid, ev.coord)


class _SasRunner:
    def __init__(self, instance, alpha, spec):
        k = spec.k if spec.k is not None else stability_param(spec.eps, alpha)
        self.alg = StableApproximation(instance, alpha, k)

    def assignment(self):
        return self.alg.assignment

    def step(self, ev: TraceEvent):
        self.alg.apply_update(ev.op, ev.pid, ev.coord)


class _StableRunner:
    def __init__(self, instance, alpha, spec):
        if spec.kind == "one-stable":
            self.alg = OneStable(instance)
        elif spec.kind == "two-stable":
            self.alg = TwoStable(instance)
        else:
            self.alg = ThreeStable(instance, spec.delta)

    def assignment(self):
        return self.alg.assignment

    def step(self, ev: TraceEvent):
        self.alg.apply_update(ev.op, ev.pid, ev.coord)


class _CircleOptRunner:
    def __init__(self, instance, alpha, spec):
        self.instance = instance
        self.alpha = alpha
        self.sol = solve_optimal_s1(instance, alpha)

    def assignment(self):
        return self.sol.assignment

    def step(self, ev: TraceEvent):
        if ev.op == "insert":
            self.instance = self.instance.with_insert(ev.pid, ev.coord)
        else:
            self.instance = self.instance.with_delete(ev.pid)
        self.sol = solve_optimal_s1(self.instance, self.alpha)


class _MstRunner:
    def __init__(self, instance, alpha, spec):
        self.tree = build_mst(instance)

    def assignment(self):
        return mst_range_assignment(self.tree)

    def step(self, ev: TraceEvent):
        self.tree = mst_update(self.tree, ev)


def _make_runner(instance: Instance, alpha: float, spec: AlgorithmSpec):
    space = instance.space
    if isinstance(space, Line):
        if spec.kind == "opt-dynamic":
            return _LineOptRunner(instance, alpha, spec)
        if spec.kind == "sas":
            return _SasRunner(instance, alpha, spec)
        if spec.kind in ("one-stable", "two-stable", "three-stable"):
            return _StableRunner(instance, alpha, spec)
    elif isinstance(space, Circle):
        if spec.kind == "opt-dynamic":
            return _CircleOptRunner(instance, alpha, spec)
    elif isinstance(space, Plane):
        if spec.kind == "mst":
            if alpha < 2.0:
                raise ValidationError(
                    "plane runs need an exponent >= 2 (the reference bound "
                    "is only valid there)")
            return _MstRunner(instance, alpha, spec)
    raise ValidationError(
        f"algorithm {spec.kind!r} does not run on a {space_name(space)} instance")


# ---------------------------------------------------------------------------
# references
# ---------------------------------------------------------------------------


class _LineReference:
    def __init__(self, instance, alpha, runner):
        self.dyn = DynamicOptimum(instance, alpha)
        self.alpha = alpha

    def cost(self):
        return cost_alpha(self.dyn.current_optimum().assignment, self.alpha)

    def step(self, ev: TraceEvent):
        self.dyn.apply_update(ev.op, ev.pid, ev.coord)


class _CircleReference:
    """Shares the runner's per-step solve; the reference IS the algorithm."""

    def __init__(self, instance, alpha, runner):
        self.runner = runner
        self.alpha = alpha

    def cost(self):
        return cost_alpha(self.runner.sol.assignment, self.alpha)

    def step(self, ev: TraceEvent):
        pass


class _PlaneReference:
    """Certified lower bound from the runner's own tree."""

    def __init__(self, instance, alpha, runner):
        self.runner = runner
        self.alpha = alpha

    def cost(self):
        return opt_lower_bound_r2(self.runner.tree, self.alpha)

    def step(self, ev: TraceEvent):
        pass


def _make_reference(instance: Instance, alpha: float, runner):
    if isinstance(instance.space, Line):
        return _LineReference(instance, alpha, runner)
    if isinstance(instance.space, Circle):
        return _CircleReference(instance, alpha, runner)
    return _PlaneReference(instance, alpha, runner)


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------


def _ratio(alg_cost: float, ref_cost: float) -> float:
    if ref_cost == 0.0:
        return 1.0 if alg_cost == 0.0 else float("inf")
    return alg_cost / ref_cost


def run_trace(
    instance: Instance,
    trace: Trace,
    algorithm,
    alpha: float,
    seed: int = 0,
    measure_time: bool = False,
) -> List[StepReport]:
    """Replay every event, asserting feasibility at each step.

    `algorithm` is an AlgorithmSpec or a parseable string.  The seed does
    not influence the replay (algorithms are deterministic); it is part of
    the reproducibility key recorded by report writers.
    """
    alpha = check_alpha(alpha)
    spec = algorithm if isinstance(algorithm, AlgorithmSpec) else parse_algorithm(algorithm)
    if not isinstance(trace, Trace):
        trace = Trace(tuple(trace))
    runner = _make_runner(instance, alpha, spec)
    reference = _make_reference(instance, alpha, runner)
    live = instance
    previous = dict(runner.assignment())
    reports: List[StepReport] = []
    for step, ev in enumerate(trace):
        # structural validation first so bad traces fail before any state moves
        if ev.op == "insert":
            live = live.with_insert(ev.pid, ev.coord)
        else:
            live = live.with_delete(ev.pid)
        t0 = time.perf_counter() if measure_time else 0.0
        runner.step(ev)
        elapsed = (time.perf_counter() - t0) * 1000.0 if measure_time else 0.0
        reference.step(ev)
        assignment = runner.assignment()
        if not is_feasible(live, assignment):
            raise AssertionError(
                f"step {step}: {spec.label()} produced an infeasible assignment")
        alg_cost = cost_alpha(assignment, alpha)
        ref_cost = reference.cost()
        delta = assignment_diff(previous, assignment)
        previous = dict(assignment)
        reports.append(StepReport(
            step=step,
            event=f"{ev.op}:{ev.pid}",
            alg_cost=alg_cost,
            ref_cost=ref_cost,
            ratio=_ratio(alg_cost, ref_cost),
            increased=delta.increased,
            decreased=delta.decreased,
            ms=elapsed,
        ))
    return reports


def summarize(reports: List[StepReport]) -> Dict[str, float]:
    """Maxima a run promises bounds for; empty runs summarize to zeros."""
    if not reports:
        return {"max_ratio": 0.0, "max_increased": 0, "max_decreased": 0}
    return {
        "max_ratio": max(r.ratio for r in reports),
        "max_increased": max(r.increased for r in reports),
        "max_decreased": max(r.decreased for r in reports),
    }


# ---------------------------------------------------------------------------
# random workloads
# ---------------------------------------------------------------------------


def random_trace(
    kind: str,
    n_events: int,
    seed: int,
    alpha: float = 2.0,
    delete_prob: float = 0.25,
) -> Tuple[Instance, Trace]:
    """Source-only instance plus a reproducible insert/delete stream.

    kind "uniform": line coordinates uniform in [-1, 1], plane coordinates
    uniform in the unit square.  kind "clustered": same domains but points
    huddle around a few cluster centers.  Suffix "-plane" switches to the
    plane ("uniform-plane", "clustered-plane").
    """
    import random as _random

    base, _, suffix = kind.partition("-")
    if base not in ("uniform", "clustered") or suffix not in ("", "plane", "line"):
        raise ValidationError(f"unknown workload kind {kind!r}")
    if n_events < 0:
        raise ValidationError("need a non-negative event count")
    plane = suffix == "plane"
    rng = _random.Random(seed)
    if plane:
        instance = Instance(Plane(), "s", {"s": (0.5, 0.5)})
    else:
        instance = Instance(Line(), "s", {"s": 0.0})
    centers = []
    if base == "clustered":
        for _ in range(max(2, n_events // 25)):
            centers.append((rng.uniform(0, 1), rng.uniform(0, 1)) if plane
                           else rng.uniform(-1, 1))

    def draw():
        if base == "uniform":
            return ((rng.uniform(0, 1), rng.uniform(0, 1)) if plane
                    else rng.uniform(-1, 1))
        c = rng.choice(centers)
        if plane:
            return (c[0] + rng.gauss(0, 0.01), c[1] + rng.gauss(0, 0.01))
        return c + rng.gauss(0, 0.01)

    def far_enough(c, live):
        if plane:
            return all((c[0] - v[0]) ** 2 + (c[1] - v[1]) ** 2 > 1e-12 for v in live.values())
        return all(abs(c - v) > 1e-6 for v in live.values())

    live = dict(instance.points)
    events: List[TraceEvent] = []
    serial = 0
    for _ in range(n_events):
        if len(live) > 2 and rng.random() < delete_prob:
            pid = rng.choice(sorted(p for p in live if p != "s"))
            events.append(TraceEvent("delete", pid))
            del live[pid]
            continue
        serial += 1
        pid = f"p{serial}"
        while True:
            c = draw()
            if far_enough(c, live):
                break
        events.append(TraceEvent("insert", pid, c))
        live[pid] = c
    return instance, Trace(tuple(events))
