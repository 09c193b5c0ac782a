"""Request and response models for the analysis service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class SystemSpec(BaseModel):
    """System definition, either competition coefficients or raw components."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["lotka_volterra", "custom"]
    a: list[list[float]] | None = None
    b: list[float] | None = None
    dimension: int | None = None
    components: list[str] | None = None

    def definition(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


class ToolInfo(BaseModel):
    name: str
    version: str


class MatrixPayload(BaseModel):
    rows: int
    cols: int
    data: list[float]  # row-major


class StatePayload(BaseModel):
    x: list[float]
    y: list[float]
    p: list[float]


class AnalyzeRequest(BaseModel):
    system: SystemSpec
    point: list[float]
    velocity: list[float] | None = None  # defaults to the field value at the point


class AnalysisReport(BaseModel):
    tool: ToolInfo
    system: dict[str, Any]
    state: StatePayload
    jacobian: MatrixPayload
    semispray: list[float]
    nonlinear_connection: MatrixPayload
    d_torsions: list[MatrixPayload]
    yang_mills_energy: float
    hamilton_connection: MatrixPayload
    hamilton_torsions: list[MatrixPayload]
    first_invariant: list[float]
    deviation_matrix: MatrixPayload
    spectrum: list[list[float]]  # (re, im) pairs sorted by real part then imaginary
    verdict: str
    sign_convention: str


class StabilityRequest(BaseModel):
    system: SystemSpec


class StabilityResponse(BaseModel):
    csv: str
    skipped: list[str]


class IntegrateRequest(BaseModel):
    system: SystemSpec
    x0: list[float]
    h: float = Field(gt=0)
    steps: int = Field(ge=1)
    mode: Literal["flow", "el"] = "flow"
    y0: list[float] | Literal["X"] | None = None  # "X" or omitted: start on the flow
    residual: bool = False


class IntegrateResponse(BaseModel):
    csv: str
    truncated: bool
    truncated_at: float | None


class SurfaceRequest(BaseModel):
    system: SystemSpec
    rho: float = Field(ge=0)
    resolution: int = Field(default=16, ge=8)
    format: Literal["obj", "csv"] = "obj"
    axial_extent: float = Field(default=10.0, gt=0)


class SurfaceResponse(BaseModel):
    classification: str
    format: str
    content: str


class SweepAxisSpec(BaseModel):
    path: str
    lo: float
    hi: float
    step: float = Field(gt=0)


class SweepRequest(BaseModel):
    system: SystemSpec
    axes: list[SweepAxisSpec] = Field(min_length=1, max_length=2)
    workers: int = Field(default=1, ge=1, le=64)


class SweepResponse(BaseModel):
    csv: str
