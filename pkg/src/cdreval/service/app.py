"""HTTP surface over the evaluation ops. Run with `cdreval serve` or uvicorn."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, ops
from ..core import default_registry
from ..errors import CdrError
from . import schemas

app = FastAPI(title="cdreval", version=__version__)


@app.exception_handler(CdrError)
async def cdr_error_handler(_request: Request, exc: CdrError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": exc.code, "detail": str(exc)})


@app.exception_handler(FileNotFoundError)
async def not_found_handler(_request: Request, exc: FileNotFoundError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "FileNotFound", "detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "engine": f"cdreval {__version__}"}


@app.get("/axes", response_model=list[schemas.AxisModel])
def axes() -> list[schemas.AxisModel]:
    registry = default_registry()
    return [
        schemas.AxisModel(name=name, direction=registry.get(name).direction.value)
        for name in registry.names()
    ]


@app.post("/validate", response_model=schemas.ValidateResponse)
def validate(req: schemas.ValidateRequest) -> schemas.ValidateResponse:
    return schemas.ValidateResponse(**ops.op_validate(req.embeddings, req.verdicts))


@app.post("/metrics", response_model=schemas.MetricsResponse)
def metrics(req: schemas.MetricsRequest) -> schemas.MetricsResponse:
    result = ops.op_metrics(
        embeddings=req.embeddings,
        sweep=req.sweep,
        out=req.out,
        verdicts=req.verdicts,
        axes=req.axes,
        k=req.k,
        group_by=req.group_by,
    )
    return schemas.MetricsResponse(**result)


@app.post("/pareto", response_model=schemas.ParetoResponse)
def pareto(req: schemas.ParetoRequest) -> schemas.ParetoResponse:
    return schemas.ParetoResponse(**ops.op_pareto(req.metrics, req.out, req.pairs))


@app.post("/plot", response_model=schemas.PlotResponse)
def plot(req: schemas.PlotRequest) -> schemas.PlotResponse:
    return schemas.PlotResponse(
        **ops.op_plot(req.metrics, req.pareto, req.out, req.width, req.height)
    )


@app.post("/simulate", response_model=schemas.SimulateResponse)
def simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    result = ops.op_simulate(
        world=req.world,
        sweep=req.sweep,
        out=req.out,
        seed=req.seed,
        n_per_prompt=req.n_per_prompt,
        n_real_per_prompt=req.n_real_per_prompt,
    )
    return schemas.SimulateResponse(**result)
