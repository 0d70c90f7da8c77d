"""Request and response models for the HTTP service.

These stay deliberately thin: they pin the wire shapes and delegate all
semantic validation (source present, coordinates distinct, and so on) to
the core constructors via the fileio converters.
"""
from __future__ import annotations

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict

from .fileio import event_from_obj, event_to_obj, instance_from_obj, instance_to_obj
from .harness import StepReport, Trace
from .model import Instance, TraceEvent


class InstanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    space: Literal["line", "circle", "plane"]
    source: str
    points: List[List[Union[str, float]]]
    perimeter: Optional[float] = None

    def to_instance(self) -> Instance:
        return instance_from_obj(self.model_dump(exclude_none=True))

    @classmethod
    def from_instance(cls, instance: Instance) -> "InstanceModel":
        return cls(**instance_to_obj(instance))


class EventModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    op: Literal["insert", "delete"]
    id: str
    coord: Optional[Union[float, List[float]]] = None

    def to_event(self) -> TraceEvent:
        return event_from_obj(self.model_dump(exclude_none=True),
                              where=f"event for {self.id!r}")

    @classmethod
    def from_event(cls, ev: TraceEvent) -> "EventModel":
        return cls(**event_to_obj(ev))


class SolveRequest(BaseModel):
    instance: InstanceModel
    alpha: float = 2.0


class SolveResponse(BaseModel):
    space: str
    alpha: float
    assignment: Dict[str, float]
    cost: float
    root: Optional[str] = None
    root_range: Optional[float] = None
    cut_index: Optional[int] = None


class SimulateRequest(BaseModel):
    instance: InstanceModel
    trace: List[EventModel]
    algorithm: str
    alpha: float = 2.0
    seed: int = 0
    timing: bool = False

    def to_trace(self) -> Trace:
        return Trace(tuple(ev.to_event() for ev in self.trace))


class StepModel(BaseModel):
    step: int
    event: str
    alg_cost: float
    ref_cost: float
    ratio: float
    increased: int
    decreased: int
    ms: float

    @classmethod
    def from_report(cls, r: StepReport) -> "StepModel":
        return cls(step=r.step, event=r.event, alg_cost=r.alg_cost,
                   ref_cost=r.ref_cost, ratio=r.ratio, increased=r.increased,
                   decreased=r.decreased, ms=r.ms)


class SummaryModel(BaseModel):
    max_ratio: float
    max_increased: int
    max_decreased: int


class SimulateResponse(BaseModel):
    steps: List[StepModel]
    summary: SummaryModel


class GenerateRequest(BaseModel):
    kind: str
    n: int
    alpha: float = 2.0
    seed: int = 0


class GenerateResponse(BaseModel):
    instance: InstanceModel
    trace: List[EventModel]
