"""Pydantic request/response models for the HTTP service and the CLI.

These mirror the documented JSON file formats; deep validation of map
and test-function specs stays in :mod:`causal2d.fieldio`, so the models
here are thin transport schemas.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from ..config import Config, default_seed


class ConfigModel(BaseModel):
    grid: int = 256
    probes: tuple[int, int] = (5, 5)
    tol: float = 1e-5
    oracle_pairs: int = 10_000
    seed: Optional[int] = None  # None resolves through CAUSAL2D_SEED
    mollifier_center: Optional[float] = None
    mollifier_radius: Optional[float] = None

    def resolve(self) -> Config:
        return Config(
            grid=self.grid,
            probes_u=self.probes[0],
            probes_v=self.probes[1],
            tol=self.tol,
            oracle_pairs=self.oracle_pairs,
            seed=self.seed if self.seed is not None else default_seed(),
            mollifier_center=self.mollifier_center,
            mollifier_radius=self.mollifier_radius,
        )


class FieldModel(BaseModel):
    rect: list[float] = Field(min_length=4, max_length=4)
    nu: int
    nv: int
    values: list[float]

    @field_validator("values")
    @classmethod
    def _non_empty(cls, v):
        if not v:
            raise ValueError("field values must not be empty")
        return v


class TestFnModel(BaseModel):
    kind: Literal["bump", "tensor"]
    center: Optional[float] = None
    radius: Optional[float] = None
    amplitude: Optional[float] = None
    u: Optional[dict] = None
    v: Optional[dict] = None


class MapModel(BaseModel):
    kind: Literal["split", "general"]
    orientation: Optional[Literal["increasing", "decreasing"]] = None
    phi: Optional[dict] = None
    psi: Optional[dict] = None
    sigma: Optional[dict] = None
    tau: Optional[dict] = None
    inverse: Optional[dict] = None
    domain: list[float] = Field(min_length=4, max_length=4)
    codomain: Optional[list[float]] = None


class Series1D(BaseModel):
    x: list[float]
    y: list[float]


# --- requests ---------------------------------------------------------------

class CheckMapRequest(BaseModel):
    map: MapModel
    config: ConfigModel = ConfigModel()


class SeparateRequest(BaseModel):
    field: FieldModel
    config: ConfigModel = ConfigModel()


class WeakDerivRequest(BaseModel):
    field: FieldModel
    order: Literal["u", "v", "uv"]
    config: ConfigModel = ConfigModel()


class GenFieldRequest(BaseModel):
    expr: str
    rect: list[float] = Field(min_length=4, max_length=4)
    resolution: int = 256


class PairRequest(BaseModel):
    field: FieldModel
    testfn: TestFnModel
    config: ConfigModel = ConfigModel()


# --- responses --------------------------------------------------------------

class CheckMapResponse(BaseModel):
    is_causal_iso: bool
    classification: str
    condition: Optional[int]
    invariance_residual_forward: float
    invariance_residual_backward: float
    oracle_violations: int
    roundtrip_error: float
    details: dict
    config: dict


class SeparateResponse(BaseModel):
    c: float
    residual: float
    separable: bool
    tol: float
    alpha: Series1D
    beta: Series1D
    config: dict


class WeakDerivResponse(BaseModel):
    residual: float
    tol: float
    verdict: Literal["zero", "nonzero"]
    probe_count: int
    config: dict


class GenFieldResponse(BaseModel):
    field: FieldModel


class PairResponse(BaseModel):
    value: float
    config: dict
