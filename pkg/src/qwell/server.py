"""HTTP front end exposing each pipeline as a POST endpoint.

Domain failures surface as 422 responses carrying the error class name, so
clients can distinguish a bad request from a simulator defect (500).
"""

from __future__ import annotations

from importlib import metadata

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import pipelines
from .errors import SimulatorError
from .schemas import (
    CompareOracleResult,
    DumpResult,
    HealthReport,
    IpeResult,
    QpeResult,
    RunConfig,
    SolveExactResult,
)

app = FastAPI(title="qwell", description="square-well spectroscopy simulator")


@app.exception_handler(SimulatorError)
async def _domain_error(_request: Request, exc: SimulatorError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/health", response_model=HealthReport)
def health() -> HealthReport:
    try:
        version = metadata.version("qwell")
    except metadata.PackageNotFoundError:
        version = "unknown"
    return HealthReport(status="ok", package="qwell", version=version)


@app.post("/solve-exact", response_model=SolveExactResult)
def solve_exact(cfg: RunConfig) -> SolveExactResult:
    return pipelines.run_solve_exact(cfg)


@app.post("/simulate-qpe", response_model=QpeResult)
def simulate_qpe(cfg: RunConfig) -> QpeResult:
    return pipelines.run_qpe(cfg)


@app.post("/simulate-ipe", response_model=IpeResult)
def simulate_ipe(cfg: RunConfig, inject_theta: float | None = None) -> IpeResult:
    return pipelines.run_ipe(cfg, inject_theta=inject_theta)


@app.post("/dump-circuit", response_model=DumpResult)
def dump_circuit(cfg: RunConfig, verify: bool = False) -> DumpResult:
    return pipelines.run_dump_circuit(cfg, verify=verify)


@app.post("/compare-oracle", response_model=CompareOracleResult)
def compare_oracle(cfg: RunConfig) -> CompareOracleResult:
    return pipelines.run_compare_oracle(cfg)
