"""FastAPI wrapper around the numerical core.

All endpoints are stateless POSTs: the computations are pure, so the
service can run any number of workers and requests never interact.
Domain errors (bad map specs, margin violations, expression faults)
come back as 400 with the message; schema violations are FastAPI's
usual 422.

Run with:  uvicorn causal2d.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import Causal2DError
from . import ops
from .models import (
    CheckMapRequest,
    CheckMapResponse,
    GenFieldRequest,
    GenFieldResponse,
    PairRequest,
    PairResponse,
    SeparateRequest,
    SeparateResponse,
    WeakDerivRequest,
    WeakDerivResponse,
)

app = FastAPI(
    title="causal2d",
    description=(
        "Weak-derivative calculus, additive separation and causal-isomorphism "
        "decisions for sampled fields on null-coordinate rectangles."
    ),
)


@app.exception_handler(Causal2DError)
async def _domain_error(_: Request, exc: Causal2DError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_error(_: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/v1/check-map", response_model=CheckMapResponse)
def check_map(req: CheckMapRequest) -> CheckMapResponse:
    return ops.run_check_map(req)


@app.post("/v1/separate", response_model=SeparateResponse)
def separate(req: SeparateRequest) -> SeparateResponse:
    return ops.run_separate(req)


@app.post("/v1/weak-deriv", response_model=WeakDerivResponse)
def weak_deriv(req: WeakDerivRequest) -> WeakDerivResponse:
    return ops.run_weak_deriv(req)


@app.post("/v1/gen-field", response_model=GenFieldResponse)
def gen_field(req: GenFieldRequest) -> GenFieldResponse:
    return ops.run_gen_field(req)


@app.post("/v1/pair", response_model=PairResponse)
def pair_field(req: PairRequest) -> PairResponse:
    return ops.run_pair(req)
