"""Service operations: request model in, response model out.

Both the FastAPI endpoints and the command-line client call these, so
all orchestration lives in one place and the two front ends stay thin.
"""

from __future__ import annotations

from ..causal import decide_causal_isomorphism
from ..decomp import additively_separate
from ..fieldio import (
    field_from_dict,
    field_to_dict,
    plane_map_from_dict,
    sample_expression,
    testfn_from_dict,
)
from ..geometry import Rect
from ..pairing import ProbeSet, pair, residual, weak_du, weak_dv, weak_mixed
from .models import (
    CheckMapRequest,
    CheckMapResponse,
    FieldModel,
    GenFieldRequest,
    GenFieldResponse,
    PairRequest,
    PairResponse,
    SeparateRequest,
    SeparateResponse,
    Series1D,
    WeakDerivRequest,
    WeakDerivResponse,
)


def run_check_map(req: CheckMapRequest) -> CheckMapResponse:
    plane_map = plane_map_from_dict(req.map.model_dump(exclude_none=True))
    cfg = req.config.resolve()
    verdict = decide_causal_isomorphism(plane_map, cfg)
    return CheckMapResponse(**verdict.to_dict(), config=cfg.to_dict())


def run_separate(req: SeparateRequest) -> SeparateResponse:
    f = field_from_dict(req.field.model_dump())
    cfg = req.config.resolve()
    phi0 = cfg.shared_mollifier(f.grid.rect)
    sep = additively_separate(f, phi0)
    return SeparateResponse(
        c=sep.c,
        residual=sep.residual,
        separable=sep.separable(cfg.tol),
        tol=cfg.tol,
        alpha=Series1D(x=list(sep.alpha.x), y=list(sep.alpha.y)),
        beta=Series1D(x=list(sep.beta.x), y=list(sep.beta.y)),
        config=cfg.to_dict(),
    )


def run_weak_deriv(req: WeakDerivRequest) -> WeakDerivResponse:
    f = field_from_dict(req.field.model_dump())
    cfg = req.config.resolve()
    probes = ProbeSet.lattice(f.grid.rect, (cfg.probes_u, cfg.probes_v), cfg.seed)
    functional = {"u": weak_du, "v": weak_dv, "uv": weak_mixed}[req.order](f)
    r = residual(functional, probes)
    return WeakDerivResponse(
        residual=r,
        tol=cfg.tol,
        verdict="zero" if r < cfg.tol else "nonzero",
        probe_count=len(probes),
        config=cfg.to_dict(),
    )


def run_gen_field(req: GenFieldRequest) -> GenFieldResponse:
    rect = Rect(*(float(x) for x in req.rect))
    f = sample_expression(req.expr, rect, req.resolution)
    return GenFieldResponse(field=FieldModel(**field_to_dict(f)))


def run_pair(req: PairRequest) -> PairResponse:
    f = field_from_dict(req.field.model_dump())
    cfg = req.config.resolve()
    phi = testfn_from_dict(req.testfn.model_dump(exclude_none=True))
    return PairResponse(value=pair(f, phi), config=cfg.to_dict())
