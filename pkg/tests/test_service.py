"""Service layer and HTTP endpoints."""
import pytest
from fastapi.testclient import TestClient

from broadcast_ranges import service
from broadcast_ranges.harness import Trace, random_trace
from broadcast_ranges.model import (
    Circle,
    Instance,
    Line,
    Plane,
    TraceEvent,
    ValidationError,
)
from broadcast_ranges.oracle import brute_force_cost
from broadcast_ranges.server import app


def test_solve_line():
    inst = Instance(Line(), "s", {"s": 0.0, "a": 2.0, "b": 3.0})
    out = service.solve(inst, 2.0)
    assert out["space"] == "line"
    assert out["cost"] == pytest.approx(5.0)
    assert out["root"] == "s"
    assert out["assignment"]["b"] == 0.0


def test_solve_circle():
    inst = Instance(Circle(10.0), "s", {"s": 0.0, "a": 7.0})
    out = service.solve(inst, 2.0)
    assert out["space"] == "circle"
    assert out["cost"] == pytest.approx(9.0)
    assert "cut_index" in out


def test_solve_plane_is_exact_but_capped():
    inst = Instance(Plane(), "s", {"s": (0.0, 0.0), "a": (1.0, 0.0), "b": (1.0, 1.0)})
    out = service.solve(inst, 2.0)
    assert out["cost"] == pytest.approx(brute_force_cost(inst, 2.0))
    big = {"s": (0.0, 0.0)}
    big.update({f"p{i}": (float(i), 0.5) for i in range(1, 8)})
    with pytest.raises(ValidationError):
        service.solve(Instance(Plane(), "s", big), 2.0)


def test_simulate_wrapper():
    inst, trace = random_trace("uniform", 20, seed=8)
    reports, summary = service.simulate(inst, trace, "two-stable", 2.0)
    assert len(reports) == 20
    assert summary["max_ratio"] <= 2.0 + 1e-9


def test_generate_kinds():
    for kind, n in (("sas-lb", 4), ("s1-nosas", 4), ("r2-nosas", 4),
                    ("uniform", 12), ("clustered", 12),
                    ("uniform-plane", 12), ("clustered-plane", 12)):
        instance, trace = service.generate(kind, n, 2.0, seed=3)
        assert isinstance(trace, Trace)
        live = instance
        for ev in trace:
            live = (live.with_insert(ev.pid, ev.coord) if ev.op == "insert"
                    else live.with_delete(ev.pid))
    with pytest.raises(ValidationError):
        service.generate("mystery", 4)


# ---------------------------------------------------------------------------
# HTTP endpoints
# ---------------------------------------------------------------------------


client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_http_solve_line():
    r = client.post("/solve", json={
        "instance": {"space": "line", "source": "s",
                     "points": [["s", 0.0], ["a", 2.0], ["b", 3.0]]},
        "alpha": 2.0})
    assert r.status_code == 200
    body = r.json()
    assert body["cost"] == pytest.approx(5.0)
    assert body["assignment"]["s"] == pytest.approx(2.0)
    assert "cut_index" not in body  # line responses omit circle-only fields


def test_http_solve_circle():
    r = client.post("/solve", json={
        "instance": {"space": "circle", "perimeter": 10.0, "source": "s",
                     "points": [["s", 0.0], ["a", 7.0]]}})
    assert r.status_code == 200
    assert r.json()["cost"] == pytest.approx(9.0)


def test_http_rejects_invalid_instance():
    r = client.post("/solve", json={
        "instance": {"space": "line", "source": "s",
                     "points": [["s", 0.0], ["a", 0.0]]}})
    assert r.status_code == 422
    assert "coincide" in r.json()["detail"]
    # pydantic-level garbage is a 422 as well
    r = client.post("/solve", json={"instance": {"space": "helix"}})
    assert r.status_code == 422


def test_http_simulate():
    r = client.post("/simulate", json={
        "instance": {"space": "line", "source": "s", "points": [["s", 0.0]]},
        "trace": [{"op": "insert", "id": "a", "coord": 0.001},
                  {"op": "insert", "id": "b", "coord": -0.001},
                  {"op": "insert", "id": "c", "coord": 1.0},
                  {"op": "insert", "id": "d", "coord": -1.0}],
        "algorithm": "two-stable"})
    assert r.status_code == 200
    body = r.json()
    assert len(body["steps"]) == 4
    assert body["steps"][-1]["ratio"] >= 1.99
    assert body["summary"]["max_increased"] <= 2


def test_http_simulate_rejects_wrong_space():
    r = client.post("/simulate", json={
        "instance": {"space": "line", "source": "s", "points": [["s", 0.0]]},
        "trace": [], "algorithm": "mst"})
    assert r.status_code == 422


def test_http_generate_round_trips_into_simulate():
    r = client.post("/generate", json={"kind": "sas-lb", "n": 8})
    assert r.status_code == 200
    body = r.json()
    r2 = client.post("/simulate", json={
        "instance": body["instance"], "trace": body["trace"],
        "algorithm": "sas:8"})
    assert r2.status_code == 200
    summary = r2.json()["summary"]
    assert summary["max_increased"] <= 11
    assert summary["max_decreased"] <= 11
    assert summary["max_ratio"] <= 1.5 + 1e-9


def test_http_generate_unknown_kind():
    r = client.post("/generate", json={"kind": "surprise", "n": 3})
    assert r.status_code == 422
