"""Quadrature engine and the three integral families.

All quadratures use fixed Gauss-Legendre order 16 per panel with adaptive
bisection, panels summed segment by segment in ascending parameter order,
so identical inputs give bit-identical results.

The multiplicative contour integral of f along C is computed as the exp of
one ordinary contour integral of the branch-tracked logarithm (the primary
path); an independent assembly from four real line integrals of ln|f| and
the unwrapped phase is provided as a cross-check, and a midpoint product
over a uniform partition serves as the brute-force limit-definition oracle.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .branch import BranchPolicy, LogTrack, build_log_track
from .curves import ParametricCurve
from .errors import (
    IntegralOverflowError,
    NonPositiveValueError,
    ToleranceNotMetError,
)
from .expr import Expr, evaluate_array
from .multivalued import MultiValuedIntegral

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

# beyond this, exp() of the accumulated log-integral overflows a double
EXP_OVERFLOW_LIMIT = 700.0


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


DEFAULT_SETTINGS = QuadratureSettings()

Integrand = Callable[[np.ndarray], np.ndarray]


def _gl16(fn: Integrand, t0: float, t1: float) -> complex:
    half = 0.5 * (t1 - t0)
    ts = 0.5 * (t0 + t1) + half * _GL_NODES
    return half * complex(np.sum(_GL_WEIGHTS * fn(ts)))


class _Accumulator:
    __slots__ = ("value", "est_error", "panels", "tolerance_met")

    def __init__(self) -> None:
        self.value = 0j
        self.est_error = 0.0
        self.panels = 0
        self.tolerance_met = True


def _adapt(
    fn: Integrand,
    t0: float,
    t1: float,
    coarse: complex,
    abs_tol_per_unit: float,
    settings: QuadratureSettings,
    depth: int,
    acc: _Accumulator,
) -> None:
    tm = 0.5 * (t0 + t1)
    left = _gl16(fn, t0, tm)
    right = _gl16(fn, tm, t1)
    fine = left + right
    err = abs(fine - coarse)
    tol = max(abs_tol_per_unit * (t1 - t0), settings.rel_tol * abs(fine))
    if err <= tol or depth >= settings.max_depth:
        if err > tol:
            acc.tolerance_met = False
        acc.value += fine
        acc.est_error += err
        acc.panels += 2
        return
    _adapt(fn, t0, tm, left, abs_tol_per_unit, settings, depth + 1, acc)
    _adapt(fn, tm, t1, right, abs_tol_per_unit, settings, depth + 1, acc)


def _quad_curve(
    fn: Integrand,
    curve: ParametricCurve,
    settings: QuadratureSettings,
) -> tuple[complex, float, int]:
    """Adaptive integral of fn over the curve's parameter range.

    Returns (value, error estimate, panel count); raises ToleranceNotMet
    with the best estimate attached if any panel hit max_depth unresolved.
    """
    total_len = curve.t_end - curve.t_start
    acc = _Accumulator()
    for seg in curve.segments:
        coarse = _gl16(fn, seg.t_start, seg.t_end)
        _adapt(
            fn,
            seg.t_start,
            seg.t_end,
            coarse,
            settings.abs_tol / total_len,
            settings,
            0,
            acc,
        )
    if not acc.tolerance_met:
        raise ToleranceNotMetError(
            f"quadrature tolerance not met (error estimate {acc.est_error:g})",
            estimate=acc.value,
            est_error=acc.est_error,
        )
    return acc.value, acc.est_error, acc.panels


def _as_integrand_of_t(g: "LogTrack | Expr | Integrand") -> Integrand:
    if isinstance(g, LogTrack):
        return g.log_values
    if isinstance(g, Expr):
        return lambda ts: evaluate_array(g, {"t": ts.astype(np.complex128)})
    return g


def contour_integral(
    g: "LogTrack | Expr | Integrand",
    curve: ParametricCurve,
    settings: QuadratureSettings | None = None,
) -> complex:
    """Ordinary contour integral: the integral over [a, b] of g(t) z'(t) dt.

    ``g`` may be a log track, an expression in t, or a vectorized callable.
    """
    settings = settings or DEFAULT_SETTINGS
    g_fn = _as_integrand_of_t(g)
    value, _, _ = _quad_curve(
        lambda ts: g_fn(ts) * curve.velocities(ts), curve, settings
    )
    return value


def _differential_weight(curve: ParametricCurve, differential: str, ts: np.ndarray) -> np.ndarray:
    vel = curve.velocities(ts)
    if differential == "dx":
        return vel.real
    if differential == "dy":
        return vel.imag
    if differential == "ds":
        return np.abs(vel)
    raise ValueError(f"differential must be dx, dy or ds, got {differential!r}")


def _positive_values(
    h: "Expr | Callable[[np.ndarray, np.ndarray], np.ndarray]",
    curve: ParametricCurve,
    ts: np.ndarray,
) -> np.ndarray:
    zs = curve.points(ts)
    if isinstance(h, Expr):
        w = evaluate_array(
            h, {"x": zs.real.astype(np.complex128), "y": zs.imag.astype(np.complex128)}
        )
        if np.any(np.abs(w.imag) > 1e-12 * (1.0 + np.abs(w.real))):
            raise NonPositiveValueError("integrand is not real-valued on the curve")
        values = w.real
    else:
        values = np.asarray(h(zs.real, zs.imag), dtype=float)
    if np.any(values <= 0.0):
        raise NonPositiveValueError("integrand is not positive at a quadrature node")
    return values


def line_star_integral(
    h: "Expr | Callable[[np.ndarray, np.ndarray], np.ndarray]",
    curve: ParametricCurve,
    differential: str = "dx",
    settings: QuadratureSettings | None = None,
) -> float:
    """Multiplicative line integral exp(integral of ln h in dx, dy or ds).

    ``h`` is an expression in (x, y), or a vectorized callable, positive on
    the curve.  The result is always a positive real number.
    """
    settings = settings or DEFAULT_SETTINGS

    def fn(ts: np.ndarray) -> np.ndarray:
        return np.log(_positive_values(h, curve, ts)).astype(np.complex128) * _differential_weight(curve, differential, ts)

    value, _, _ = _quad_curve(fn, curve, settings)
    if value.real > EXP_OVERFLOW_LIMIT:
        raise IntegralOverflowError(
            "line *integral overflows; its logarithm is attached", log_value=value
        )
    return math.exp(value.real)


def _exp_guarded(log_value: complex) -> complex:
    if log_value.real > EXP_OVERFLOW_LIMIT:
        raise IntegralOverflowError(
            "*integral overflows; its logarithm is attached", log_value=log_value
        )
    return cmath.exp(log_value)


def star_integral_from_track(
    track: LogTrack,
    settings: QuadratureSettings | None = None,
) -> MultiValuedIntegral:
    """Multiplicative integral computed from a prebuilt log track."""
    settings = settings or DEFAULT_SETTINGS
    curve = track.curve
    log_value, err, panels = _quad_curve(
        lambda ts: track.log_values(ts) * curve.velocities(ts), curve, settings
    )
    return MultiValuedIntegral(
        principal=_exp_guarded(log_value),
        delta=curve.displacement(),
        est_error=err,
        panels=panels,
    )


def star_integral(
    f: Expr,
    curve: ParametricCurve,
    k0: int = 0,
    settings: QuadratureSettings | None = None,
    policy: BranchPolicy | None = None,
) -> MultiValuedIntegral:
    """The multiplicative contour integral of f along the curve.

    The principal member is exp of the contour integral of the continuous
    log determination anchored at branch k0; the rest of the family is
    generated by the endpoint displacement.
    """
    track = build_log_track(f, curve, k0, policy)
    return star_integral_from_track(track, settings)


def star_integral_via_cartesian(
    f: Expr,
    curve: ParametricCurve,
    n: int = 0,
    k0: int = 0,
    settings: QuadratureSettings | None = None,
    policy: BranchPolicy | None = None,
) -> complex:
    """Cross-check path: family member n assembled from four real line
    integrals of ln R and the unwrapped phase Theta (shifted by 2*pi*n).

    Must agree with multivalue_at(star_integral(...), n).
    """
    settings = settings or DEFAULT_SETTINGS
    track = build_log_track(f, curve, k0, policy)
    shift = 2.0 * math.pi * n

    def ln_r(ts: np.ndarray) -> np.ndarray:
        return track.log_values(ts).real.astype(np.complex128)

    def theta_n(ts: np.ndarray) -> np.ndarray:
        return (track.log_values(ts).imag + shift).astype(np.complex128)

    def weighted(g: Integrand, differential: str) -> Integrand:
        return lambda ts: g(ts) * _differential_weight(curve, differential, ts)

    ln_r_dx, _, _ = _quad_curve(weighted(ln_r, "dx"), curve, settings)
    theta_dy, _, _ = _quad_curve(weighted(theta_n, "dy"), curve, settings)
    theta_dx, _, _ = _quad_curve(weighted(theta_n, "dx"), curve, settings)
    ln_r_dy, _, _ = _quad_curve(weighted(ln_r, "dy"), curve, settings)

    log_value = complex(
        ln_r_dx.real - theta_dy.real,
        theta_dx.real + ln_r_dy.real,
    )
    return _exp_guarded(log_value)


def riemann_star_product(
    f: Expr,
    curve: ParametricCurve,
    k0: int = 0,
    m: int = 4096,
    policy: BranchPolicy | None = None,
) -> complex:
    """Midpoint integral product over a uniform m-interval partition.

    This is the limit-definition approximant: exp of the sum of the tracked
    log at the midpoint image times the chord z_k - z_{k-1}.  Converges to
    the principal member at order 2 in 1/m.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    track = build_log_track(f, curve, k0, policy)
    ts = np.linspace(curve.t_start, curve.t_end, m + 1)
    chords = np.diff(curve.points(ts))
    mids = 0.5 * (ts[:-1] + ts[1:])
    logs = track.log_values(mids)
    return _exp_guarded(complex(np.sum(logs * chords)))
