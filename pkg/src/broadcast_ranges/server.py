"""HTTP service exposing solve, simulate, and generate.

Input problems (bad instances, incompatible algorithms, malformed traces)
come back as 422 with the core error message; everything else is a plain
500.  The app is stateless, so one process can serve concurrent callers.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import service
from .model import ValidationError
from .schemas import (
    EventModel,
    GenerateRequest,
    GenerateResponse,
    InstanceModel,
    SimulateRequest,
    SimulateResponse,
    SolveRequest,
    SolveResponse,
    StepModel,
    SummaryModel,
)


def create_app() -> FastAPI:
    app = FastAPI(title="broadcast-ranges",
                  description="dynamic broadcast range assignment")

    @app.exception_handler(ValidationError)
    async def _invalid(request: Request, exc: ValidationError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/solve", response_model=SolveResponse,
              response_model_exclude_none=True)
    async def solve(req: SolveRequest):
        return service.solve(req.instance.to_instance(), req.alpha)

    @app.post("/simulate", response_model=SimulateResponse)
    async def simulate(req: SimulateRequest):
        reports, summary = service.simulate(
            req.instance.to_instance(), req.to_trace(), req.algorithm,
            req.alpha, seed=req.seed, timing=req.timing)
        return SimulateResponse(
            steps=[StepModel.from_report(r) for r in reports],
            summary=SummaryModel(**summary))

    @app.post("/generate", response_model=GenerateResponse)
    async def generate(req: GenerateRequest):
        instance, trace = service.generate(req.kind, req.n, req.alpha, req.seed)
        return GenerateResponse(
            instance=InstanceModel.from_instance(instance),
            trace=[EventModel.from_event(ev) for ev in trace])

    return app


app = create_app()
