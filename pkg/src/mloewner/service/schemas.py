"""Request/response models for the HTTP service and the thin CLI client."""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..benchmark import EvalReport
from ..complexity import ComplexityReport, format_bytes
from ..grid import GridAxis, GridTensor
from ..models import BarycentricModel, MonomialModel, factor_shapes


class AxisPayload(BaseModel):
    name: str
    points: list[float]


class TensorPayload(BaseModel):
    axes: list[AxisPayload]
    values: list[float]

    @classmethod
    def from_tensor(cls, t: GridTensor) -> "TensorPayload":
        return cls(
            axes=[AxisPayload(name=a.name, points=a.points.tolist()) for a in t.axes],
            values=t.values.tolist(),
        )

    def to_tensor(self) -> GridTensor:
        axes = tuple(
            GridAxis(a.name, a.points[0], a.points[-1], np.asarray(a.points))
            for a in self.axes
        )
        return GridTensor(axes, np.asarray(self.values))


class ModelPayload(BaseModel):
    """Wire form of a barycentric model; mirrors the model file schema."""

    model_config = ConfigDict(populate_by_name=True)

    lambdas: list[list[float]] = Field(alias="lambda")
    weights: list[float]
    values: list[float]
    factors: Optional[list[list[float]]] = None

    @classmethod
    def from_model(cls, m: BarycentricModel) -> "ModelPayload":
        return cls(
            lambdas=[x.tolist() for x in m.lambdas],
            weights=m.weights.tolist(),
            values=m.values.tolist(),
            factors=None
            if m.factors is None
            else [f.reshape(-1).tolist() for f in m.factors],
        )

    def to_model(self) -> BarycentricModel:
        lambdas = tuple(np.asarray(x, dtype=float) for x in self.lambdas)
        ks = tuple(x.size for x in lambdas)
        factors = None
        if self.factors is not None:
            factors = tuple(
                np.asarray(flat, dtype=float).reshape(shape)
                for flat, shape in zip(self.factors, factor_shapes(ks))
            )
        return BarycentricModel(
            lambdas, np.asarray(self.weights), np.asarray(self.values), factors
        )


class MonomialPayload(BaseModel):
    num: list[float]
    den: list[float]
    shape: list[int]

    @classmethod
    def from_model(cls, m: MonomialModel) -> "MonomialPayload":
        return cls(
            num=m.num.reshape(-1).tolist(),
            den=m.den.reshape(-1).tolist(),
            shape=list(m.shape),
        )

    def to_model(self) -> MonomialModel:
        shape = tuple(self.shape)
        return MonomialModel(
            np.asarray(self.num).reshape(shape), np.asarray(self.den).reshape(shape)
        )


class KstPayload(BaseModel):
    lambdas: list[list[float]] = Field(alias="lambda")
    barys: list[list[float]]
    values: list[float]

    model_config = ConfigDict(populate_by_name=True)


class SampleRequest(BaseModel):
    case: int
    bounds: Optional[list[tuple[float, float]]] = None
    grid: Optional[list[int]] = None


class SampleResponse(BaseModel):
    tensor: TensorPayload


class FitRequest(BaseModel):
    case: Optional[int] = None
    tensor: Optional[TensorPayload] = None
    bounds: Optional[list[tuple[float, float]]] = None
    grid: Optional[list[int]] = None
    method: Literal["direct", "adaptive"] = "direct"
    tol_ord: Optional[float] = None
    k: Optional[list[int]] = None
    max_k: Optional[int] = None
    tol: Optional[float] = None
    tol_k: float = -1.0
    null_method: Literal["svd", "qr", "solve"] = "svd"
    max_iters: int = 100


class TraceRowPayload(BaseModel):
    iteration: int
    added_variables: list[int]
    node: Optional[list[float]]
    max_residual: float
    k: list[int]


class ComplexityPayload(BaseModel):
    k: list[int]
    flops_recursive: int
    flops_full: int
    max_entries_recursive: int
    max_entries_full: int
    bytes_recursive_real: int
    bytes_recursive_complex: int
    bytes_full_real: int
    bytes_full_complex: int
    human_recursive: str
    human_full: str

    @classmethod
    def from_report(cls, r: ComplexityReport) -> "ComplexityPayload":
        return cls(
            **r.to_dict(),
            human_recursive=format_bytes(r.bytes_recursive()),
            human_full=format_bytes(r.bytes_full()),
        )


class FitResponse(BaseModel):
    model: ModelPayload
    k: list[int]
    complexity: Optional[ComplexityPayload] = None
    status: str = "ok"
    trace: Optional[list[TraceRowPayload]] = None


class EvalRequest(BaseModel):
    model: ModelPayload
    points: list[list[float]]
    form: Literal["barycentric", "monomial", "kst"] = "barycentric"


class EvalResponse(BaseModel):
    values: list[float]


class ConvertRequest(BaseModel):
    model: ModelPayload
    to: Literal["monomial", "kst", "graph"]
    part: Literal["numerator", "denominator"] = "denominator"


class ConvertResponse(BaseModel):
    monomial: Optional[MonomialPayload] = None
    kst: Optional[KstPayload] = None
    graph: Optional[str] = None


class ComplexityRequest(BaseModel):
    k: list[int]


class ReportRowPayload(BaseModel):
    case_id: int
    klass: str
    method: str
    config: str
    rmse: float
    model_scalars: int
    fit_seconds: float
    status: str
    pole_redraws: int = 0
    error: Optional[str] = None

    @classmethod
    def from_report(cls, r: EvalReport) -> "ReportRowPayload":
        return cls(
            case_id=r.case_id, klass=r.klass, method=r.method, config=r.config,
            rmse=r.rmse, model_scalars=r.model_scalars, fit_seconds=r.fit_seconds,
            status=r.status, pole_redraws=r.pole_redraws, error=r.error,
        )

    def to_report(self) -> EvalReport:
        return EvalReport(
            self.case_id, self.klass, self.method, self.config, self.rmse,
            self.model_scalars, self.fit_seconds, self.status,
            self.pole_redraws, self.error,
        )


class BenchRequest(BaseModel):
    cases: list[int]
    method: Literal["direct", "adaptive"] = "direct"
    draws: int = 500
    seed: int = 0
    jobs: int = 1
    full: bool = False


class BenchResponse(BaseModel):
    reports: list[ReportRowPayload]
    csv: str


class CatalogEntry(BaseModel):
    id: int
    label: str
    omega: int
    bounds: list[tuple[float, float]]
    grid_sizes: list[int]
    klass: str
    available: bool


class HealthResponse(BaseModel):
    status: str
    version: str
