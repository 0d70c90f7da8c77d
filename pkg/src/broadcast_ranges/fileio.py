"""File formats: instance JSON, trace JSONL, and step reports as CSV or JSON.

Rendering goes through strings so identical runs produce identical bytes:
floats are serialized with repr (shortest round-trip form), JSON objects
with sorted keys, and CSV rows with a fixed column order and "\n" line
endings.  Parse failures carry line and column positions; semantic
failures name the offending point id.
"""
from __future__ import annotations

import io
import json
import os
from dataclasses import asdict
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .harness import StepReport, Trace, summarize
from .model import (
    Circle,
    Instance,
    Line,
    Plane,
    Space,
    TraceEvent,
    ValidationError,
)

Pathish = Union[str, os.PathLike]

CSV_HEADER = "step,event,alg_cost,ref_cost,ratio,inc,dec,ms"

_SUMMARY_KEYS = ("max_ratio", "max_increased", "max_decreased")


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------


def _coord_from_row(row: Sequence, space: Space, where: str):
    values = row[1:]
    if isinstance(space, Plane):
        if len(values) != 2:
            raise ValidationError(f"{where}: plane rows are [id, x, y], got {row!r}")
        return (float(values[0]), float(values[1]))
    if len(values) != 1:
        raise ValidationError(f"{where}: rows are [id, x], got {row!r}")
    return float(values[0])


def instance_from_obj(obj) -> Instance:
    """Builds an Instance from the parsed JSON form, naming bad ids."""
    if not isinstance(obj, dict):
        raise ValidationError("instance file must hold a JSON object")
    kind = obj.get("space")
    if kind == "line":
        space: Space = Line()
    elif kind == "plane":
        space = Plane()
    elif kind == "circle":
        if "perimeter" not in obj:
            raise ValidationError("circle instances need a perimeter")
        space = Circle(float(obj["perimeter"]))
    else:
        raise ValidationError(f"unknown space {kind!r}; expected line, circle, or plane")
    if kind != "circle" and "perimeter" in obj:
        raise ValidationError("perimeter only applies to circle instances")
    source = obj.get("source")
    if not isinstance(source, str):
        raise ValidationError("instance needs a string source id")
    rows = obj.get("points")
    if not isinstance(rows, list):
        raise ValidationError("instance needs a points list")
    points = {}
    for row in rows:
        if not isinstance(row, list) or not row or not isinstance(row[0], str):
            raise ValidationError(f"point rows are [id, ...coords], got {row!r}")
        pid = row[0]
        if pid in points:
            raise ValidationError(f"duplicate point id {pid!r} in points list")
        points[pid] = _coord_from_row(row, space, f"point {pid!r}")
    return Instance(space, source, points)


def instance_to_obj(instance: Instance) -> dict:
    if isinstance(instance.space, Plane):
        rows = [[pid, c[0], c[1]] for pid, c in sorted(instance.points.items())]
    else:
        rows = [[pid, c] for pid, c in sorted(instance.points.items())]
    obj = {"space": "line" if isinstance(instance.space, Line)
           else "circle" if isinstance(instance.space, Circle) else "plane",
           "source": instance.source,
           "points": rows}
    if isinstance(instance.space, Circle):
        obj["perimeter"] = instance.space.perimeter
    return obj


def render_instance(instance: Instance) -> str:
    return json.dumps(instance_to_obj(instance), sort_keys=True, indent=2) + "\n"


def load_instance(path: Pathish) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}")
    return instance_from_obj(obj)


def save_instance(instance: Instance, path: Pathish) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_instance(instance))


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


def event_from_obj(obj, where: str = "event") -> TraceEvent:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: events are JSON objects, got {obj!r}")
    op = obj.get("op")
    pid = obj.get("id")
    if op not in ("insert", "delete"):
        raise ValidationError(f"{where}: op must be insert or delete, got {op!r}")
    if not isinstance(pid, str):
        raise ValidationError(f"{where}: events need a string id")
    if op == "delete":
        if "coord" in obj:
            raise ValidationError(f"{where}: delete of {pid!r} must not carry a coord")
        return TraceEvent("delete", pid)
    coord = obj.get("coord")
    if isinstance(coord, (int, float)) and not isinstance(coord, bool):
        return TraceEvent("insert", pid, float(coord))
    if isinstance(coord, list) and len(coord) == 2:
        return TraceEvent("insert", pid, (float(coord[0]), float(coord[1])))
    raise ValidationError(
        f"{where}: insert of {pid!r} needs coord as a number or [x, y]")


def event_to_obj(ev: TraceEvent) -> dict:
    obj = {"op": ev.op, "id": ev.pid}
    if ev.op == "insert":
        obj["coord"] = list(ev.coord) if isinstance(ev.coord, tuple) else ev.coord
    return obj


def render_trace(trace: Trace) -> str:
    out = io.StringIO()
    for ev in trace:
        out.write(json.dumps(event_to_obj(ev), sort_keys=True))
        out.write("\n")
    return out.getvalue()


def load_trace(path: Pathish) -> Trace:
    events: List[TraceEvent] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(
                    f"{path}: parse error at line {lineno} column {exc.colno}: {exc.msg}")
            events.append(event_from_obj(obj, where=f"{path}: line {lineno}"))
    return Trace(tuple(events))


def save_trace(trace: Trace, path: Pathish) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_trace(trace))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def render_report_csv(reports: Sequence[StepReport],
                      summary: Optional[Dict] = None) -> str:
    """Header-only when empty; otherwise rows plus trailing summary comments."""
    lines = [CSV_HEADER]
    if not reports:
        return "\n".join(lines) + "\n"
    for r in reports:
        lines.append(",".join([
            str(r.step), r.event, _fmt(r.alg_cost), _fmt(r.ref_cost),
            _fmt(r.ratio), str(r.increased), str(r.decreased), _fmt(r.ms)]))
    if summary is None:
        summary = summarize(list(reports))
    for key in _SUMMARY_KEYS:
        lines.append(f"# {key}={_fmt(summary[key])}")
    return "\n".join(lines) + "\n"


def write_report_csv(reports: Sequence[StepReport], path: Pathish,
                     summary: Optional[Dict] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_report_csv(reports, summary))


def read_report_csv(path: Pathish) -> Tuple[List[StepReport], Dict]:
    reports: List[StepReport] = []
    summary: Dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValidationError(f"{path}: expected header {CSV_HEADER!r}")
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition("=")
            if key not in _SUMMARY_KEYS:
                raise ValidationError(f"{path}: line {lineno}: unknown summary key {key!r}")
            summary[key] = float(value) if key == "max_ratio" else int(value)
            continue
        parts = line.split(",")
        if len(parts) != 8:
            raise ValidationError(f"{path}: line {lineno}: expected 8 columns")
        try:
            reports.append(StepReport(
                step=int(parts[0]), event=parts[1],
                alg_cost=float(parts[2]), ref_cost=float(parts[3]),
                ratio=float(parts[4]), increased=int(parts[5]),
                decreased=int(parts[6]), ms=float(parts[7])))
        except ValueError as exc:
            raise ValidationError(f"{path}: line {lineno}: {exc}")
    if not summary:
        summary = summarize(reports)
    return reports, summary


def report_to_obj(reports: Sequence[StepReport],
                  summary: Optional[Dict] = None) -> dict:
    if summary is None:
        summary = summarize(list(reports))
    return {"steps": [asdict(r) for r in reports], "summary": dict(summary)}


def reports_from_obj(obj) -> Tuple[List[StepReport], Dict]:
    if not isinstance(obj, dict) or "steps" not in obj:
        raise ValidationError("report JSON needs a steps list")
    reports = []
    for step in obj["steps"]:
        try:
            reports.append(StepReport(**step))
        except TypeError as exc:
            raise ValidationError(f"bad report step {step!r}: {exc}")
    summary = obj.get("summary") or summarize(reports)
    return reports, dict(summary)


def render_report_json(reports: Sequence[StepReport],
                       summary: Optional[Dict] = None) -> str:
    return json.dumps(report_to_obj(reports, summary), sort_keys=True, indent=2) + "\n"


def write_report_json(reports: Sequence[StepReport], path: Pathish,
                      summary: Optional[Dict] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_report_json(reports, summary))


def load_report_json(path: Pathish) -> Tuple[List[StepReport], Dict]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}")
    return reports_from_obj(obj)
