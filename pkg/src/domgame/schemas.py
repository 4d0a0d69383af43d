"""Request and response models for the HTTP service.

All responses carry schema_version so downstream consumers can detect
format changes; the CLI emits the same shapes.
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1

GraphSource = Field(
    description="graph6 string or builtin spec (path:N, spider:P,Q,R, pprime:N, pdprime:N)",
    min_length=1,
)


class SolveRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    graph: str = GraphSource
    dominated: list[int] = []
    first: Literal["dominator", "staller"] = "dominator"
    pass_entitlement: Literal["none", "staller", "dominator"] = Field(
        default="none", alias="pass"
    )
    trace: bool = False


class TraceStep(BaseModel):
    mover: Literal["dominator", "staller"]
    move: Union[int, Literal["pass"]]


class SolveResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    moves: int
    trace: list[TraceStep] | None = None


class ClassifyRequest(BaseModel):
    graph: str = GraphSource


class ClassifyResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = SCHEMA_VERSION
    gamma_g: int
    gamma_g_prime: int
    classification: Literal["PLUS", "EQUAL", "MINUS"] = Field(
        serialization_alias="class"
    )


class AnalyzeRequest(BaseModel):
    graph: str = GraphSource


class AnalyzeResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    graph_g6: str
    order: int
    gamma_g: int
    gamma_g_prime: int
    per_vertex: list[int]
    classification: Literal["PLUS", "EQUAL", "MINUS"]
    is_critical: bool


class LemmaCheckRequest(BaseModel):
    """Either explicit instances or a seeded random batch, never both."""

    lemma: Literal[
        "cutting",
        "extended-cutting",
        "union",
        "predominated-cut",
        "pass",
        "continuation",
        "no-minus",
    ]
    instances: list[dict] | None = None
    seed: int | None = None
    count: int | None = None


class VerdictModel(BaseModel):
    lemma_id: str
    instance: dict
    lhs: int
    rhs: int
    holds: bool


class LemmaCheckResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    lemma: str
    seed: int | None
    holds: bool
    violations: int
    verdicts: list[VerdictModel]


class SpiderRequest(BaseModel):
    p: int
    q: int
    r: int


class SpiderResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    p: int
    q: int
    r: int
    order: int
    expected_value: int
    gamma_g: int
    gamma_g_prime: int
    is_critical: bool
    passed: bool


class ScanRequest(BaseModel):
    n: int = Field(ge=1, le=24)
    budget: float | None = Field(default=None, gt=0)


class ScanResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    n: int
    trees_scanned: int
    critical_count: int
    wall_time: float
    complete: bool
    reports: list[AnalyzeResponse]


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
