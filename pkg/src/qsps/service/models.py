"""Pydantic request/response schemas for the verification service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class ToleranceOverride(BaseModel):
    rank_rel_tol: float | None = Field(default=None, gt=0)
    check_abs_tol: float | None = Field(default=None, gt=0)


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tolerances: ToleranceOverride | None = None


class FibresRequest(_Request):
    ideal: str
    level: int | None = Field(default=None, ge=2)


class FreeProductRequest(_Request):
    ideal_a: str
    ideal_b: str
    level: int = Field(default=5, ge=2)
    verify_decomposition: bool = False


class TLCheckRequest(_Request):
    ideal: str
    fock_level: int = Field(default=6, ge=2)


class WMapsRequest(_Request):
    ideal_a: str
    ideal_b: str
    level: int = Field(default=3, ge=1)


class GraphJoinRequest(_Request):
    matrix_a: list[str]
    matrix_b: list[str]
    level: int = Field(default=6, ge=2)


class Suq2Request(_Request):
    weights: str
    q: float = Field(default=1.0, gt=0, le=1)
    level: int = Field(default=4, ge=2)


class KTheoryRequest(_Request):
    ideal: str | None = None
    weights: str | None = None
    q: float = Field(default=1.0, gt=0, le=1)


class AbelianGroupModel(BaseModel):
    free_rank: int
    torsion: list[int]
    text: str


class KGroupsModel(BaseModel):
    k0: AbelianGroupModel
    k1: AbelianGroupModel
    euler_class: int
    hypotheses: str


class Report(BaseModel):
    """Envelope common to every endpoint; results vary per command."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=1, alias="schema")
    command: str
    inputs_digest: str
    tolerances: dict[str, float]
    verdict: str
    results: dict
    runtime_seconds: float | None = None


class HealthResponse(BaseModel):
    status: str
    version: str
