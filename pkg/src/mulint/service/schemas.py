"""Pydantic request/response models for the HTTP service and the CLI."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class ComplexModel(BaseModel):
    re: float
    im: float

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexModel":
        return cls(re=value.real, im=value.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class ValueEntry(BaseModel):
    n: int
    re: float
    im: float


class QuadratureInfo(BaseModel):
    est_error: float
    panels: int


class _CurveRequest(BaseModel):
    function: str
    constants: dict[str, str] = Field(default_factory=dict)
    curve: str


class IntegrateRequest(_CurveRequest):
    k0: int = 0
    n_lo: int = -8
    n_hi: int = 8
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10

    @model_validator(mode="after")
    def _check(self) -> "IntegrateRequest":
        if self.n_lo > self.n_hi:
            raise ValueError("n_lo must not exceed n_hi")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        return self


class IntegrateResponse(BaseModel):
    principal: ComplexModel
    delta: ComplexModel
    cardinality: "str | dict[str, int]"
    values: list[ValueEntry]
    quadrature: QuadratureInfo


class StarDerivRequest(BaseModel):
    function: str
    constants: dict[str, str] = Field(default_factory=dict)
    at: str


class StarDerivResponse(BaseModel):
    value: ComplexModel


class LineIntegrateRequest(_CurveRequest):
    differential: str = "dx"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10

    @model_validator(mode="after")
    def _check(self) -> "LineIntegrateRequest":
        if self.differential not in ("dx", "dy", "ds"):
            raise ValueError("differential must be dx, dy or ds")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        return self


class LineIntegrateResponse(BaseModel):
    value: float


class RiemannRequest(_CurveRequest):
    k0: int = 0
    m: int = 4096

    @model_validator(mode="after")
    def _check(self) -> "RiemannRequest":
        if self.m < 1:
            raise ValueError("m must be at least 1")
        return self


class RiemannResponse(BaseModel):
    value: ComplexModel


class VerifyRequest(BaseModel):
    suite: str = "all"
    seed: int | None = None


class FailureEntry(BaseModel):
    fixture: str
    residual: float


class SuiteReport(BaseModel):
    suite: str
    fixtures: int
    max_residual: float
    tolerance: float
    passed: bool
    failures: list[FailureEntry]


class VerifyResponse(BaseModel):
    reports: list[SuiteReport]


class SampleRequest(BaseModel):
    function: str
    constants: dict[str, str] = Field(default_factory=dict)
    curve: str
    k0: int = 0


class ErrorPayload(BaseModel):
    kind: str  # 'parse' | 'domain' | 'tolerance'
    stage: str  # 'parse' | 'track' | 'quadrature'
    message: str
