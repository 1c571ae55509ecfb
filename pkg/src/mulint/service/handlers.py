"""Request handlers shared by the HTTP endpoints and the CLI."""

from __future__ import annotations

from ..curves import ParametricCurve, parse_curve_spec
from ..branch import build_log_track
from ..expr import Expr, bind_constants, parse_complex_literal, parse_expression
from ..integrate import (
    QuadratureSettings,
    line_star_integral,
    riemann_star_product,
    star_integral,
)
from ..starcalc import star_derivative
from ..verify import SUITE_NAMES, run_suite
from .schemas import (
    ComplexModel,
    IntegrateRequest,
    IntegrateResponse,
    LineIntegrateRequest,
    LineIntegrateResponse,
    QuadratureInfo,
    RiemannRequest,
    RiemannResponse,
    SampleRequest,
    StarDerivRequest,
    StarDerivResponse,
    SuiteReport,
    FailureEntry,
    ValueEntry,
    VerifyRequest,
    VerifyResponse,
)


def _parse_function(source: str, constants: dict[str, str], variables: set[str]) -> Expr:
    bound = {name: parse_complex_literal(text) for name, text in constants.items()}
    ast = parse_expression(source, variables | set(bound))
    return bind_constants(ast, bound)


def _curve(spec: str) -> ParametricCurve:
    return parse_curve_spec(spec)


def handle_integrate(req: IntegrateRequest) -> IntegrateResponse:
    f = _parse_function(req.function, req.constants, {"z"})
    curve = _curve(req.curve)
    settings = QuadratureSettings(abs_tol=req.abs_tol, rel_tol=req.rel_tol)
    result = star_integral(f, curve, req.k0, settings)
    return IntegrateResponse(
        principal=ComplexModel.from_complex(result.principal),
        delta=ComplexModel.from_complex(result.delta),
        cardinality=result.cardinality.to_json(),
        values=[
            ValueEntry(n=n, re=v.real, im=v.imag)
            for n, v in result.values(req.n_lo, req.n_hi)
        ],
        quadrature=QuadratureInfo(est_error=result.est_error, panels=result.panels),
    )


def handle_star_deriv(req: StarDerivRequest) -> StarDerivResponse:
    f = _parse_function(req.function, req.constants, {"z"})
    z = parse_complex_literal(req.at)
    return StarDerivResponse(value=ComplexModel.from_complex(star_derivative(f, z)))


def handle_line_integrate(req: LineIntegrateRequest) -> LineIntegrateResponse:
    h = _parse_function(req.function, req.constants, {"x", "y"})
    curve = _curve(req.curve)
    settings = QuadratureSettings(abs_tol=req.abs_tol, rel_tol=req.rel_tol)
    return LineIntegrateResponse(
        value=line_star_integral(h, curve, req.differential, settings)
    )


def handle_riemann(req: RiemannRequest) -> RiemannResponse:
    f = _parse_function(req.function, req.constants, {"z"})
    curve = _curve(req.curve)
    value = riemann_star_product(f, curve, req.k0, req.m)
    return RiemannResponse(value=ComplexModel.from_complex(value))


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    names = SUITE_NAMES if req.suite == "all" else (req.suite,)
    reports = []
    for name in names:
        kwargs = {} if req.seed is None else {"seed": req.seed}
        report = run_suite(name, **kwargs)
        reports.append(
            SuiteReport(
                suite=name,
                fixtures=report.fixtures_run,
                max_residual=report.max_residual,
                tolerance=report.tolerance,
                passed=report.passed,
                failures=[
                    FailureEntry(fixture=fid, residual=res)
                    for fid, res in report.failures
                ],
            )
        )
    return VerifyResponse(reports=reports)


def handle_sample(req: SampleRequest) -> str:
    """CSV of the track samples: parameter, curve point, function value,
    modulus and unwrapped phase."""
    f = _parse_function(req.function, req.constants, {"z"})
    curve = _curve(req.curve)
    track = build_log_track(f, curve, req.k0)
    zs = curve.points(track.ts)
    lines = ["t,re_z,im_z,re_f,im_f,abs_f,theta_unwrapped"]
    for t, z, w, theta in zip(track.ts, zs, track.values, track.theta):
        row = (t, z.real, z.imag, w.real, w.imag, abs(w), theta)
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
