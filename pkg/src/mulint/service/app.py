"""FastAPI application wrapping the library."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from ..errors import MulintError, ParseError, ToleranceNotMetError
from . import handlers
from .schemas import (
    ErrorPayload,
    IntegrateRequest,
    IntegrateResponse,
    LineIntegrateRequest,
    LineIntegrateResponse,
    RiemannRequest,
    RiemannResponse,
    SampleRequest,
    StarDerivRequest,
    StarDerivResponse,
    VerifyRequest,
    VerifyResponse,
)


def error_payload(exc: MulintError) -> ErrorPayload:
    if isinstance(exc, ParseError):
        kind = "parse"
    elif isinstance(exc, ToleranceNotMetError):
        kind = "tolerance"
    else:
        kind = "domain"
    return ErrorPayload(kind=kind, stage=exc.stage, message=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(
        title="mulint",
        description=(
            "Multiplicative derivatives and multi-valued multiplicative "
            "contour integrals along parametric curves"
        ),
        version="0.1.0",
    )

    @app.exception_handler(MulintError)
    async def _mulint_error(request: Request, exc: MulintError) -> JSONResponse:
        payload = error_payload(exc)
        status = 400 if payload.kind == "parse" else 422
        return JSONResponse(status_code=status, content=payload.model_dump())

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/integrate", response_model=IntegrateResponse)
    def integrate(req: IntegrateRequest) -> IntegrateResponse:
        return handlers.handle_integrate(req)

    @app.post("/star-deriv", response_model=StarDerivResponse)
    def star_deriv(req: StarDerivRequest) -> StarDerivResponse:
        return handlers.handle_star_deriv(req)

    @app.post("/line-integrate", response_model=LineIntegrateResponse)
    def line_integrate(req: LineIntegrateRequest) -> LineIntegrateResponse:
        return handlers.handle_line_integrate(req)

    @app.post("/riemann", response_model=RiemannResponse)
    def riemann(req: RiemannRequest) -> RiemannResponse:
        return handlers.handle_riemann(req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        return handlers.handle_verify(req)

    @app.post("/sample")
    def sample(req: SampleRequest) -> PlainTextResponse:
        return PlainTextResponse(handlers.handle_sample(req), media_type="text/csv")

    return app


app = create_app()
