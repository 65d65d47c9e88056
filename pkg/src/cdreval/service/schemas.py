"""Pydantic request/response models for the evaluation service.

Requests carry server-side paths: embedding payloads are far too large to
inline, so the service contract is path-based like the CLI.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ValidateRequest(BaseModel):
    embeddings: str = Field(description="Path prefix of the .cdre/.meta.jsonl pair")
    verdicts: Optional[str] = None


class ViolationModel(BaseModel):
    kind: str
    record_id: Optional[str] = None
    detail: str = ""


class ValidateResponse(BaseModel):
    ok: bool
    rows: int
    violations: list[ViolationModel]
    verdicts: Optional[int] = None
    unmatched_verdict_records: list[str] = []


class MetricsRequest(BaseModel):
    embeddings: str
    sweep: str
    out: str
    verdicts: Optional[str] = None
    axes: Optional[list[str]] = None
    k: int = Field(default=3, ge=1)
    group_by: Literal["group", "none"] = "group"


class MetricPointModel(BaseModel):
    config_id: str
    group_id: str
    scores: dict[str, float]
    missing: dict[str, str] = {}
    raw: dict[str, float] = {}
    notes: dict[str, str] = {}


class MetricsResponse(BaseModel):
    points: list[MetricPointModel]
    files: dict[str, str]


class ParetoRequest(BaseModel):
    metrics: str
    out: str
    pairs: Optional[list[list[str]]] = None


class ParetoResponse(BaseModel):
    pairs: list[dict]
    files: dict[str, str]


class PlotRequest(BaseModel):
    metrics: str
    pareto: str
    out: str
    width: int = Field(default=640, gt=0)
    height: int = Field(default=480, gt=0)


class PlotResponse(BaseModel):
    files: list[str]


class SimulateRequest(BaseModel):
    world: str
    sweep: str
    out: str
    seed: Optional[int] = None
    n_per_prompt: int = Field(default=10, ge=1)
    n_real_per_prompt: Optional[int] = Field(default=None, ge=1)


class SimulateResponse(BaseModel):
    rows_real: int
    rows_generated: int
    verdicts: int
    seed: int
    files: dict[str, str]


class AxisModel(BaseModel):
    name: str
    direction: Literal["max", "min"]


class ErrorResponse(BaseModel):
    error: str
    detail: str
