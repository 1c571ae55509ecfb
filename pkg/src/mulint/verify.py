"""Executable property suites for the multiplicative-integral identities.

Each check runs one fixture and returns a PropertyReport; the suite runners
sweep a deterministic fixture corpus (functions crossed with curves, pairs
on which f comes too close to zero rejected) and merge reports by fixture
id.  Set-level identities are asserted in their indexed-window form: the
value families are cosets of the same factor, so index arithmetic under
shared anchoring is the strongest finitely checkable statement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branch import build_log_track
from .curves import ParametricCurve, arc, circle, line_segment, polyline
from .errors import MulintError
from .expr import (
    Const,
    Div,
    Expr,
    Mul,
    Var,
    bind_constants,
    evaluate,
    evaluate_array,
    parse_expression,
    principal_arg,
)
from .integrate import (
    QuadratureSettings,
    line_star_integral,
    star_integral,
    star_integral_from_track,
)
from .multivalued import multivalue_at
from .starcalc import real_star_partial, star_derivative_expr

TWO_PI = 2.0 * math.pi

DEFAULT_TOLERANCE = 1e-8
CORPUS_SEED = 20240817
MIN_ABS_ON_CURVE = 1e-6


@dataclass(frozen=True)
class PropertyReport:
    name: str
    fixtures_run: int
    max_residual: float
    tolerance: float
    failures: tuple[tuple[str, float], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _report(name: str, tolerance: float, residuals: dict[str, float]) -> PropertyReport:
    failures = tuple(
        (fid, res) for fid, res in sorted(residuals.items()) if res > tolerance
    )
    max_residual = max(residuals.values()) if residuals else 0.0
    return PropertyReport(name, len(residuals), max_residual, tolerance, failures)


def _merge(name: str, tolerance: float, parts: list[PropertyReport]) -> PropertyReport:
    residuals: dict[str, float] = {}
    for part in parts:
        residuals[part.name] = part.max_residual
    return _report(name, tolerance, residuals)


def _rel(err: float, scale: float) -> float:
    return err / max(scale, 1e-300)


# --------------------------------------------------------------------------
# Single-fixture checks


def check_fundamental_theorem(
    f: Expr,
    curve: ParametricCurve,
    settings: QuadratureSettings | None = None,
    n_window: tuple[int, int] = (-3, 3),
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """Integral of the multiplicative derivative of f against the endpoint
    ratio f(z(b))/f(z(a)), member by member on the index window.

    Anchoring note: the integrand's track starts at its principal log, which
    lines the computed family up with index n = 0 exactly when
    Im(f'/f)(z(a)) lies in (-pi, pi]; the standard corpus is built inside
    that regime.
    """
    result = star_integral(star_derivative_expr(f), curve, 0, settings)
    base = evaluate(f, {"z": curve.end_point()}) / evaluate(f, {"z": curve.start_point()})
    delta = curve.displacement()
    worst = 0.0
    for n in range(n_window[0], n_window[1] + 1):
        expected = np.exp(TWO_PI * n * delta * 1j) * base
        worst = max(worst, _rel(abs(multivalue_at(result, n) - expected), abs(expected)))
    return _report(fixture_id, tolerance, {fixture_id: worst})


def check_closed_curve_unity(
    f: Expr,
    curve: ParametricCurve,
    settings: QuadratureSettings | None = None,
    n_window: tuple[int, int] = (-3, 3),
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """On a closed curve, every member of the integral of f* equals 1."""
    if not curve.closed:
        raise ValueError("check_closed_curve_unity needs a closed curve")
    result = star_integral(star_derivative_expr(f), curve, 0, settings)
    worst = max(
        abs(multivalue_at(result, n) - 1.0)
        for n in range(n_window[0], n_window[1] + 1)
    )
    return _report(fixture_id, tolerance, {fixture_id: worst})


def check_concatenation(
    f: Expr,
    curve: ParametricCurve,
    c: float,
    settings: QuadratureSettings | None = None,
    n_window: tuple[int, int] = (-3, 3),
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """Member-wise factorization over a split of the parameter interval,
    with the second piece's branch anchored to the first piece's terminal
    branch value."""
    whole = star_integral(f, curve, 0, settings)
    first = curve.restrict(curve.t_start, c)
    second = curve.restrict(c, curve.t_end)
    track1 = build_log_track(f, first)
    part1 = star_integral_from_track(track1, settings)
    part2 = star_integral(f, second, track1.terminal_branch_index(), settings)
    worst = 0.0
    for n in range(n_window[0], n_window[1] + 1):
        lhs = multivalue_at(whole, n)
        rhs = multivalue_at(part1, n) * multivalue_at(part2, n)
        worst = max(worst, _rel(abs(lhs - rhs), abs(lhs)))
    return _report(fixture_id, tolerance, {fixture_id: worst})


def _matched_anchor_index(w_left: complex, w_right: complex, combined: complex) -> int:
    """Branch index making the combined track start at the sum/difference of
    the factors' principal logs."""
    return round(
        (principal_arg(w_left) + principal_arg(w_right) - principal_arg(combined))
        / TWO_PI
    )


def check_product_division(
    f: Expr,
    g: Expr,
    curve: ParametricCurve,
    settings: QuadratureSettings | None = None,
    window: int = 2,
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """Indexed form of the product and quotient set identities: with all
    three tracks anchored compatibly at t = a,
    value_f(i) * value_g(j) = value_fg(i+j) and
    value_f(i) / value_g(j) = value_f_over_g(i-j)."""
    za = curve.start_point()
    fa = evaluate(f, {"z": za})
    ga = evaluate(g, {"z": za})

    result_f = star_integral(f, curve, 0, settings)
    result_g = star_integral(g, curve, 0, settings)
    k_prod = _matched_anchor_index(fa, ga, fa * ga)
    k_quot = round(
        (principal_arg(fa) - principal_arg(ga) - principal_arg(fa / ga)) / TWO_PI
    )
    result_prod = star_integral(Mul(f, g), curve, k_prod, settings)
    result_quot = star_integral(Div(f, g), curve, k_quot, settings)

    worst = 0.0
    for i in range(-window, window + 1):
        vf = multivalue_at(result_f, i)
        for j in range(-window, window + 1):
            vg = multivalue_at(result_g, j)
            prod = multivalue_at(result_prod, i + j)
            quot = multivalue_at(result_quot, i - j)
            worst = max(worst, _rel(abs(vf * vg - prod), abs(prod)))
            worst = max(worst, _rel(abs(vf / vg - quot), abs(quot)))
    return _report(fixture_id, tolerance, {fixture_id: worst})


def check_reversal(
    f: Expr,
    curve: ParametricCurve,
    settings: QuadratureSettings | None = None,
    n_window: tuple[int, int] = (-3, 3),
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """Member-wise inversion under orientation reversal, branches matched at
    the shared endpoint z(b)."""
    track = build_log_track(f, curve)
    forward = star_integral_from_track(track, settings)
    backward = star_integral(
        f, curve.reverse(), track.terminal_branch_index(), settings
    )
    worst = 0.0
    for n in range(n_window[0], n_window[1] + 1):
        worst = max(
            worst, abs(multivalue_at(forward, n) * multivalue_at(backward, n) - 1.0)
        )
    return _report(fixture_id, tolerance, {fixture_id: worst})


def check_natural_power(
    f: Expr,
    curve: ParametricCurve,
    p: int,
    settings: QuadratureSettings | None = None,
    window: int = 2,
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """Inclusion direction of the natural-power identity:
    value_f(n)**p = value_{f^p}(p*n), the power track being p times f's."""
    if p < 0:
        raise ValueError("p must be a natural number")
    track = build_log_track(f, curve)
    base = star_integral_from_track(track, settings)
    powered = star_integral_from_track(track.power(p), settings)
    worst = 0.0
    for n in range(-window, window + 1):
        lhs = multivalue_at(base, n) ** p
        rhs = multivalue_at(powered, p * n)
        worst = max(worst, _rel(abs(lhs - rhs), abs(rhs)))
    return _report(fixture_id, tolerance, {fixture_id: worst})


def check_line_fundamental(
    fpos: Expr,
    curve: ParametricCurve,
    settings: QuadratureSettings | None = None,
    h: float = 1e-6,
    tolerance: float = DEFAULT_TOLERANCE,
    fixture_id: str = "fixture",
) -> PropertyReport:
    """Line-integral fundamental theorem for a positive function of (x, y):
    the product of the multiplicative line integrals of its partial
    *derivatives in dx and dy equals the endpoint ratio.

    The partial *derivatives are central finite-difference estimates.
    """

    def star_partial(axis: str):
        def values(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
            return np.array(
                [
                    real_star_partial(fpos, (float(x), float(y)), axis, h)
                    for x, y in zip(xs, ys)
                ]
            )

        return values

    lhs = line_star_integral(star_partial("x"), curve, "dx", settings) * line_star_integral(
        star_partial("y"), curve, "dy", settings
    )
    z0, z1 = curve.start_point(), curve.end_point()
    f0 = evaluate(fpos, {"x": complex(z0.real), "y": complex(z0.imag)}).real
    f1 = evaluate(fpos, {"x": complex(z1.real), "y": complex(z1.imag)}).real
    rhs = f1 / f0
    residual = _rel(abs(lhs - rhs), abs(rhs))
    return _report(fixture_id, tolerance, {fixture_id: residual})


# --------------------------------------------------------------------------
# Fixture corpus


@dataclass(frozen=True)
class Fixture:
    fixture_id: str
    f: Expr
    curve: ParametricCurve
    curve_id: str


def _f(source: str, **constants: complex) -> Expr:
    ast = parse_expression(source, {"z"} | set(constants))
    return bind_constants(ast, constants)


def _corpus_functions(rng: np.random.Generator) -> list[tuple[str, Expr]]:
    functions: list[tuple[str, Expr]] = [
        ("const_3", Const(complex(3.0))),
        ("const_2_m_i", Const(2.0 - 1.0j)),
        ("identity_z", Var("z")),
        ("exp_exp_z", _f("exp(exp(z))")),
        ("exp_c_exp_z", _f("exp(c*exp(z))", c=0.4 - 0.3j)),
    ]
    for k in range(5):
        c = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.5, 1.5))
        functions.append((f"exp_cz_{k}", _f("exp(c*z)", c=c)))
    for k in range(5):
        a2 = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        a1 = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        a0 = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        functions.append(
            (f"exp_quad_{k}", _f("exp(a*z^2+b*z+c)", a=a2, b=a1, c=a0))
        )
    return functions


def _corpus_curves() -> list[tuple[str, ParametricCurve]]:
    return [
        ("seg_0_1", line_segment(0.0, 1.0)),
        ("seg_0_1p1i", line_segment(0.0, 1.0 + 1.0j)),
        ("quarter_arc", arc(0.0, 0.0, 1.0, 0.0, math.pi / 2.0)),
        ("half_arc", arc(0.0, 0.0, 1.0, -math.pi / 2.0, math.pi / 2.0)),
        ("unit_circle", circle(0.0, 0.0, 1.0)),
        ("circle_2_half", circle(2.0, 0.0, 0.5)),
        ("polyline_0_1_1p1i", polyline([0.0, 1.0, 1.0 + 1.0j])),
    ]


def _min_abs_on_curve(f: Expr, curve: ParametricCurve) -> float:
    ts = np.concatenate(
        [np.linspace(seg.t_start, seg.t_end, 512) for seg in curve.segments]
    )
    try:
        w = evaluate_array(f, {"z": curve.points(ts)})
    except MulintError:
        return 0.0
    return float(np.abs(w).min())


def standard_fixtures(seed: int = CORPUS_SEED) -> tuple[Fixture, ...]:
    """Deterministic function-by-curve corpus; pairs on which |f| dips below
    the nowhere-vanishing threshold are rejected."""
    rng = np.random.default_rng(seed)
    fixtures = []
    curves = _corpus_curves()
    for fid, f in _corpus_functions(rng):
        for cid, curve in curves:
            if _min_abs_on_curve(f, curve) < MIN_ABS_ON_CURVE:
                continue
            fixtures.append(Fixture(f"{fid}__{cid}", f, curve, cid))
    return tuple(fixtures)


def closed_fixtures(seed: int = CORPUS_SEED) -> tuple[Fixture, ...]:
    return tuple(fx for fx in standard_fixtures(seed) if fx.curve.closed)


def line_fixtures() -> tuple[tuple[str, Expr, ParametricCurve], ...]:
    """Positive two-variable functions paired with short curves."""

    def _g(source: str) -> Expr:
        return parse_expression(source, {"x", "y"})

    functions = [
        ("exp_x_plus_y", _g("exp(x+y)")),
        ("const_7", _g("7")),
        ("exp_xy", _g("exp(x*y)")),
        ("poly_pos", _g("1+x^2+y^2")),
    ]
    curves = [
        ("seg_diag", line_segment(0.0, 1.0 + 1.0j)),
        ("quarter_arc", arc(0.0, 0.0, 1.0, 0.0, math.pi / 2.0)),
        ("polyline", polyline([0.0, 1.0, 1.0 + 1.0j])),
    ]
    return tuple(
        (f"{fid}__{cid}", f, curve) for fid, f in functions for cid, curve in curves
    )


# --------------------------------------------------------------------------
# Suite runners


def run_suite(
    suite: str,
    settings: QuadratureSettings | None = None,
    seed: int = CORPUS_SEED,
    tolerance: float = DEFAULT_TOLERANCE,
) -> PropertyReport:
    """Run one named suite over the standard corpus and merge per-fixture
    residuals into a single report."""
    parts: list[PropertyReport] = []
    if suite == "ftc":
        for fx in standard_fixtures(seed):
            parts.append(
                check_fundamental_theorem(
                    fx.f, fx.curve, settings, tolerance=tolerance, fixture_id=fx.fixture_id
                )
            )
    elif suite == "closed":
        for fx in closed_fixtures(seed):
            parts.append(
                check_closed_curve_unity(
                    fx.f, fx.curve, settings, tolerance=tolerance, fixture_id=fx.fixture_id
                )
            )
    elif suite == "concat":
        for fx in standard_fixtures(seed):
            a, b = fx.curve.t_start, fx.curve.t_end
            parts.append(
                check_concatenation(
                    fx.f,
                    fx.curve,
                    a + (b - a) / 3.0,
                    settings,
                    tolerance=tolerance,
                    fixture_id=fx.fixture_id,
                )
            )
    elif suite == "product":
        fixtures = standard_fixtures(seed)
        for fx, fy in zip(fixtures, fixtures[1:] + fixtures[:1]):
            # the partner must also be nowhere-vanishing on this curve
            if _min_abs_on_curve(fy.f, fx.curve) < MIN_ABS_ON_CURVE:
                continue
            parts.append(
                check_product_division(
                    fx.f,
                    fy.f,
                    fx.curve,
                    settings,
                    tolerance=tolerance,
                    fixture_id=f"{fx.fixture_id}__x__{fy.fixture_id.split('__')[0]}",
                )
            )
    elif suite == "reversal":
        for fx in standard_fixtures(seed):
            parts.append(
                check_reversal(
                    fx.f, fx.curve, settings, tolerance=tolerance, fixture_id=fx.fixture_id
                )
            )
    elif suite == "power":
        for fx in standard_fixtures(seed):
            for p in (2, 3):
                parts.append(
                    check_natural_power(
                        fx.f,
                        fx.curve,
                        p,
                        settings,
                        tolerance=tolerance,
                        fixture_id=f"{fx.fixture_id}__p{p}",
                    )
                )
    elif suite == "line-ftc":
        for fid, f, curve in line_fixtures():
            parts.append(
                check_line_fundamental(
                    f, curve, settings, tolerance=tolerance, fixture_id=fid
                )
            )
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return _merge(suite, tolerance, parts)


SUITE_NAMES = ("ftc", "closed", "concat", "product", "reversal", "power", "line-ftc")


def run_suites(
    suites: "list[str] | tuple[str, ...]" = SUITE_NAMES,
    settings: QuadratureSettings | None = None,
    seed: int = CORPUS_SEED,
) -> list[PropertyReport]:
    return [run_suite(name, settings, seed) for name in suites]
