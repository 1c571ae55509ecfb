"""Continuous single-valued determinations of log f(z(t)) along a curve.

The complex logarithm has no global branch, but along a curve on which f
never vanishes a continuous determination exists and is unique once its
value at the start is fixed.  ``build_log_track`` constructs it numerically:
sample f(z(t)) on an adaptive grid fine enough that consecutive phases move
by less than pi/2, then unwrap the principal arguments by nearest-2*pi
matching.  The unwrapped phase IS the glued branch; the per-piece branch
functions are never materialized.

``half_plane_partition`` recovers the classical localization: a finite
partition of [a, b] such that the values of f on each piece stay inside an
open half plane bounded by a line through the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import ParametricCurve
from .errors import (
    EvaluationError,
    RefinementExhaustedError,
    ZeroOnCurveError,
)
from .expr import Const, Expr, Pow, evaluate, evaluate_array

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BranchPolicy:
    """Adaptive refinement parameters for track construction."""

    initial_samples: int = 64  # per segment
    max_phase_step: float = math.pi / 2.0
    max_depth: int = 40
    unwrap_tol: float = 1e-3
    zero_tol_scale: float = 1e-12


DEFAULT_POLICY = BranchPolicy()


def _wrap(angle: float) -> float:
    """Representative of angle modulo 2*pi in (-pi, pi]."""
    return angle - TWO_PI * round(angle / TWO_PI)


def _principal_args(values: np.ndarray) -> np.ndarray:
    # collapse -0.0 imaginary parts so Arg(-x) is +pi, never -pi
    values = np.where(values.imag == 0.0, values.real + 0.0j, values)
    return np.angle(values)


def unwrap_phase(raw: "list[float] | np.ndarray") -> np.ndarray:
    """Continuous phase from principal-argument samples.

    output[0] = raw[0]; each following value is shifted by the multiple of
    2*pi that lands it nearest its predecessor, so consecutive output steps
    lie in (-pi, pi).
    """
    raw = np.asarray(raw, dtype=float)
    out = np.empty_like(raw)
    if raw.size == 0:
        return out
    out[0] = raw[0]
    for j in range(raw.size - 1):
        out[j + 1] = raw[j + 1] + TWO_PI * round((out[j] - raw[j + 1]) / TWO_PI)
    return out


@dataclass(frozen=True)
class LogTrack:
    """Sampled continuous determination of log f(z(t)) along a curve.

    ``logs`` holds ln|f(z(t))| + i*theta(t) with theta unwrapped and anchored
    at theta(a) = Arg f(z(a)) + 2*pi*k0.  Between samples, values are
    recovered by re-evaluating ln|f| exactly and re-unwrapping the phase
    against the linear interpolant of the track (valid because consecutive
    sample phases differ by less than pi/2).
    """

    f: Expr
    curve: ParametricCurve
    ts: np.ndarray
    values: np.ndarray
    logs: np.ndarray
    k0: int

    def __post_init__(self) -> None:
        for arr in (self.ts, self.values, self.logs):
            arr.setflags(write=False)

    @property
    def theta(self) -> np.ndarray:
        return self.logs.imag

    def log_values(self, ts: np.ndarray) -> np.ndarray:
        """ln|f| + i*theta at arbitrary parameters inside the track range."""
        ts = np.asarray(ts, dtype=float)
        w = evaluate_array(self.f, {"z": self.curve.points(ts)})
        raw = _principal_args(w)
        predicted = np.interp(ts, self.ts, self.theta)
        theta = raw + TWO_PI * np.round((predicted - raw) / TWO_PI)
        return np.log(np.abs(w)) + 1j * theta

    def log_at(self, t: float) -> complex:
        return complex(self.log_values(np.array([t]))[0])

    def terminal_branch_index(self) -> int:
        """Integer k with theta(b) = Arg f(z(b)) + 2*pi*k; anchoring a second
        track at this index continues the determination past t = b."""
        raw_end = _principal_args(self.values[-1:])[0]
        return round((self.theta[-1] - raw_end) / TWO_PI)

    def power(self, p: int) -> "LogTrack":
        """Track of f**p obtained by scaling: p times a continuous
        determination of log f is one admissible determination of log f**p."""
        if p < 0:
            raise ValueError("power must be a natural number")
        return LogTrack(
            f=Pow(self.f, Const(complex(p))),
            curve=self.curve,
            ts=self.ts.copy(),
            values=self.values**p,
            logs=self.logs * p,
            k0=self.k0 * p,
        )


class _TrackBuilder:
    def __init__(self, f: Expr, curve: ParametricCurve, policy: BranchPolicy):
        self.f = f
        self.curve = curve
        self.policy = policy
        self.max_abs = 0.0
        self.ts: list[float] = []
        self.ws: list[complex] = []

    def eval_f(self, t: float) -> complex:
        try:
            w = evaluate(self.f, {"z": self.curve.point(t)})
        except EvaluationError as exc:
            raise ZeroOnCurveError(f"f not evaluable at t={t}: {exc}") from exc
        a = abs(w)
        if a <= self.policy.zero_tol_scale * (1.0 + max(self.max_abs, a)):
            raise ZeroOnCurveError(f"|f(z({t}))| = {a:g} is below the zero tolerance")
        self.max_abs = max(self.max_abs, a)
        return w

    def emit(self, t: float, w: complex) -> None:
        self.ts.append(t)
        self.ws.append(w)

    def refine(self, t0: float, w0: complex, t1: float, w1: complex, depth: int) -> None:
        """Emit interior samples of (t0, t1) so adjacent phases step < pi/2
        and the phase is locally linear to within unwrap_tol."""
        tm = 0.5 * (t0 + t1)
        wm = self.eval_f(tm)
        step = _wrap(math.atan2(w1.imag, w1.real) - math.atan2(w0.imag, w0.real))
        half = _wrap(math.atan2(wm.imag, wm.real) - math.atan2(w0.imag, w0.real))
        deviation = abs(_wrap(half - 0.5 * step))
        if abs(step) < self.policy.max_phase_step and deviation <= self.policy.unwrap_tol:
            self.emit(tm, wm)
            return
        if depth >= self.policy.max_depth:
            raise RefinementExhaustedError(
                f"phase refinement exhausted near t={tm}: "
                "f has a near-zero on the curve or the curve is not smooth enough"
            )
        self.refine(t0, w0, tm, wm, depth + 1)
        self.emit(tm, wm)
        self.refine(tm, wm, t1, w1, depth + 1)

    def build(self, k0: int) -> LogTrack:
        t_first = self.curve.t_start
        w_prev = self.eval_f(t_first)
        self.emit(t_first, w_prev)
        for seg in self.curve.segments:
            grid = np.linspace(seg.t_start, seg.t_end, self.policy.initial_samples + 1)
            for t in grid[1:]:
                t = float(t)
                w = self.eval_f(t)
                self.refine(self.ts[-1], self.ws[-1], t, w, 0)
                self.emit(t, w)
        ts = np.asarray(self.ts)
        values = np.asarray(self.ws, dtype=np.complex128)
        # final scale-aware zero check against the full sampled range of |f|
        mags = np.abs(values)
        if mags.min() <= self.policy.zero_tol_scale * (1.0 + mags.max()):
            raise ZeroOnCurveError("|f| falls below the zero tolerance on the curve")
        theta = unwrap_phase(_principal_args(values)) + TWO_PI * k0
        logs = np.log(mags) + 1j * theta
        return LogTrack(self.f, self.curve, ts, values, logs, k0)


def build_log_track(
    f: Expr,
    curve: ParametricCurve,
    k0: int = 0,
    policy: BranchPolicy | None = None,
) -> LogTrack:
    """Construct the continuous determination of log f along the curve,
    anchored at Log f(z(a)) + 2*pi*i*k0."""
    return _TrackBuilder(f, curve, policy or DEFAULT_POLICY).build(k0)


@dataclass(frozen=True)
class HalfPlanePartition:
    """Breakpoints a = t_0 < ... < t_m = b with witness directions phi_k:
    on piece k, every f(z(t)) satisfies Re(f(z(t)) * exp(-i*phi_k)) > 0."""

    breakpoints: tuple[float, ...]
    witnesses: tuple[float, ...]

    @property
    def piece_count(self) -> int:
        return len(self.witnesses)

    def pieces(self) -> list[tuple[float, float, float]]:
        return [
            (self.breakpoints[k], self.breakpoints[k + 1], self.witnesses[k])
            for k in range(self.piece_count)
        ]


def half_plane_partition(
    f: Expr,
    curve: ParametricCurve,
    margin: float = 0.1,
    policy: BranchPolicy | None = None,
) -> HalfPlanePartition:
    """Greedy sweep over the unwrapped phase: close a piece whenever its
    phase oscillation would reach pi - margin.

    The witness of a piece is the midpoint of its phase range, so every
    value on the piece sits at angular distance < (pi - margin)/2 from the
    witness ray, strictly inside the open half plane.
    """
    if not 0.0 < margin < math.pi / 2.0:
        # adjacent track samples step by up to pi/2, so the oscillation cap
        # pi - margin must stay above that
        raise ValueError("margin must lie in (0, pi/2)")
    track = build_log_track(f, curve, 0, policy)
    theta = track.theta
    ts = track.ts

    breakpoints = [float(ts[0])]
    witnesses: list[float] = []
    lo = hi = theta[0]
    for j in range(1, len(ts)):
        nlo, nhi = min(lo, theta[j]), max(hi, theta[j])
        if nhi - nlo >= math.pi - margin:
            breakpoints.append(float(ts[j - 1]))
            witnesses.append(0.5 * (lo + hi))
            lo = min(theta[j - 1], theta[j])
            hi = max(theta[j - 1], theta[j])
        else:
            lo, hi = nlo, nhi
    breakpoints.append(float(ts[-1]))
    witnesses.append(0.5 * (lo + hi))
    return HalfPlanePartition(tuple(breakpoints), tuple(witnesses))
