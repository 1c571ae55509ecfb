"""Piecewise-smooth parametric curves z(t) = x(t) + i y(t) in the complex plane.

Curves are immutable after construction: joint continuity is asserted at
build time, and restriction / reversal produce new curves.  Whether a curve
is simple (non self-intersecting) is a caller obligation; it is not checked.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, ParameterOutOfRangeError, ParseError
from .expr import (
    Add,
    Call,
    Const,
    Expr,
    Mul,
    Sub,
    Var,
    differentiate,
    evaluate,
    evaluate_array,
    parse_complex_literal,
    parse_expression,
    substitute,
)

JOINT_TOL = 1e-12

_T = Var("t")


def _sample_real(exprs: tuple[Expr, ...], t: float) -> list[float]:
    values = []
    for node in exprs:
        w = evaluate(node, {"t": complex(t)})
        if abs(w.imag) > 1e-12 * (1.0 + abs(w.real)):
            raise ValueError("coordinate expression is not real-valued")
        values.append(w.real)
    return values


@dataclass(frozen=True)
class CurveSegment:
    """One smooth piece: coordinate expressions in t plus their symbolic
    derivatives (auto-derived)."""

    x_expr: Expr
    y_expr: Expr
    t_start: float
    t_end: float
    dx_expr: Expr = field(init=False, repr=False)
    dy_expr: Expr = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.t_start < self.t_end:
            raise ValueError(
                f"segment needs t_start < t_end, got [{self.t_start}, {self.t_end}]"
            )
        object.__setattr__(self, "dx_expr", differentiate(self.x_expr, "t"))
        object.__setattr__(self, "dy_expr", differentiate(self.y_expr, "t"))
        exprs = (self.x_expr, self.y_expr, self.dx_expr, self.dy_expr)
        for t in np.linspace(self.t_start, self.t_end, 9):
            try:
                _sample_real(exprs, float(t))
            except EvaluationError as exc:
                raise ValueError(
                    f"segment not evaluable/differentiable at t={t}: {exc}"
                ) from exc

    def point(self, t: float) -> complex:
        x, y = _sample_real((self.x_expr, self.y_expr), t)
        return complex(x, y)

    def velocity(self, t: float) -> complex:
        dx, dy = _sample_real((self.dx_expr, self.dy_expr), t)
        return complex(dx, dy)


@dataclass(frozen=True)
class ParametricCurve:
    """Ordered smooth segments with abutting parameter ranges."""

    segments: tuple[CurveSegment, ...]
    closed: bool = False

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("curve needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        for prev, nxt in zip(self.segments, self.segments[1:]):
            if prev.t_end != nxt.t_start:
                raise ValueError(
                    f"segment ranges must abut: {prev.t_end} != {nxt.t_start}"
                )
            gap = abs(prev.point(prev.t_end) - nxt.point(nxt.t_start))
            if gap > JOINT_TOL:
                raise ValueError(f"discontinuous joint at t={prev.t_end}: gap={gap:g}")
        if self.closed:
            gap = abs(self.end_point() - self.start_point())
            if gap > JOINT_TOL:
                raise ValueError(f"closed curve does not close: gap={gap:g}")

    @property
    def t_start(self) -> float:
        return self.segments[0].t_start

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end

    def _segment_index(self, t: float) -> int:
        starts = [seg.t_start for seg in self.segments]
        idx = bisect_right(starts, t) - 1
        return max(0, min(idx, len(self.segments) - 1))

    def point(self, t: float) -> complex:
        if t < self.t_start or t > self.t_end:
            raise ParameterOutOfRangeError(
                f"t={t} outside [{self.t_start}, {self.t_end}]"
            )
        return self.segments[self._segment_index(t)].point(t)

    def velocity(self, t: float) -> complex:
        if t < self.t_start or t > self.t_end:
            raise ParameterOutOfRangeError(
                f"t={t} outside [{self.t_start}, {self.t_end}]"
            )
        return self.segments[self._segment_index(t)].velocity(t)

    def start_point(self) -> complex:
        return self.segments[0].point(self.t_start)

    def end_point(self) -> complex:
        return self.segments[-1].point(self.t_end)

    def displacement(self) -> complex:
        """z(b) - z(a)."""
        return self.end_point() - self.start_point()

    # -- vectorized evaluation (internal quadrature fast path) --------------

    def _eval_arrays(self, ts: np.ndarray, which: str) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        starts = np.array([seg.t_start for seg in self.segments])
        idx = np.clip(
            np.searchsorted(starts, ts, side="right") - 1, 0, len(self.segments) - 1
        )
        out = np.empty(ts.shape, dtype=np.complex128)
        for k in np.unique(idx):
            seg = self.segments[k]
            mask = idx == k
            sub = {"t": ts[mask].astype(np.complex128)}
            if which == "point":
                xs, ys = seg.x_expr, seg.y_expr
            else:
                xs, ys = seg.dx_expr, seg.dy_expr
            out[mask] = evaluate_array(xs, sub).real + 1j * evaluate_array(ys, sub).real
        return out

    def points(self, ts: np.ndarray) -> np.ndarray:
        return self._eval_arrays(ts, "point")

    def velocities(self, ts: np.ndarray) -> np.ndarray:
        return self._eval_arrays(ts, "velocity")

    # -- derived curves ------------------------------------------------------

    def restrict(self, t0: float, t1: float) -> "ParametricCurve":
        """Sub-curve over [t0, t1] (never closed)."""
        if not (self.t_start <= t0 < t1 <= self.t_end):
            raise ParameterOutOfRangeError(
                f"restriction [{t0}, {t1}] outside [{self.t_start}, {self.t_end}]"
            )
        pieces = []
        for seg in self.segments:
            lo, hi = max(seg.t_start, t0), min(seg.t_end, t1)
            if lo < hi:
                pieces.append(CurveSegment(seg.x_expr, seg.y_expr, lo, hi))
        return ParametricCurve(tuple(pieces), closed=False)

    def reverse(self) -> "ParametricCurve":
        """Opposite orientation, realized by the substitution t -> a + b - t."""
        s = self.t_start + self.t_end
        flip = Sub(Const(complex(s)), _T)
        pieces = []
        for seg in reversed(self.segments):
            pieces.append(
                CurveSegment(
                    substitute(seg.x_expr, "t", flip),
                    substitute(seg.y_expr, "t", flip),
                    s - seg.t_end,
                    s - seg.t_start,
                )
            )
        return ParametricCurve(tuple(pieces), closed=self.closed)


def curve_point(curve: ParametricCurve, t: float) -> complex:
    """Evaluate z(t) on the owning segment."""
    return curve.point(t)


# --------------------------------------------------------------------------
# Builders


def _affine(c0: float, c1: float, t_offset: float) -> Expr:
    """c0 + c1 * (t - t_offset), with the shift elided when t_offset == 0."""
    t: Expr = _T if t_offset == 0.0 else Sub(_T, Const(complex(t_offset)))
    return Add(Const(complex(c0)), Mul(Const(complex(c1)), t))


def line_segment(z0: complex, z1: complex, t0: float = 0.0, t1: float = 1.0) -> ParametricCurve:
    """Straight segment from z0 to z1 parametrized over [t0, t1]."""
    z0, z1 = complex(z0), complex(z1)
    scale = 1.0 / (t1 - t0)
    seg = CurveSegment(
        _affine(z0.real, (z1.real - z0.real) * scale, t0),
        _affine(z0.imag, (z1.imag - z0.imag) * scale, t0),
        t0,
        t1,
    )
    return ParametricCurve((seg,))


def circle(cx: float, cy: float, r: float) -> ParametricCurve:
    """Full positively-oriented circle, t in [0, 2*pi]."""
    return _arc_curve(cx, cy, r, 0.0, 2.0 * math.pi, closed=True)


def arc(cx: float, cy: float, r: float, t0: float, t1: float) -> ParametricCurve:
    """Circular arc (cx + r cos t, cy + r sin t), t in [t0, t1]."""
    closed = abs((t1 - t0) - 2.0 * math.pi) < 1e-15
    return _arc_curve(cx, cy, r, t0, t1, closed=closed)


def _arc_curve(cx: float, cy: float, r: float, t0: float, t1: float, closed: bool) -> ParametricCurve:
    if r <= 0:
        raise ValueError("radius must be positive")
    x = Add(Const(complex(cx)), Mul(Const(complex(r)), Call("cos", _T)))
    y = Add(Const(complex(cy)), Mul(Const(complex(r)), Call("sin", _T)))
    return ParametricCurve((CurveSegment(x, y, t0, t1),), closed=closed)


def parametric(x_source: str, y_source: str, t0: float, t1: float) -> ParametricCurve:
    """Curve from coordinate expressions in the variable t."""
    x = parse_expression(x_source, {"t"})
    y = parse_expression(y_source, {"t"})
    seg = CurveSegment(x, y, t0, t1)
    curve = ParametricCurve((seg,))
    if abs(curve.displacement()) <= JOINT_TOL:
        curve = ParametricCurve(curve.segments, closed=True)
    return curve


def polyline(points: list[complex]) -> ParametricCurve:
    """Chained straight segments through ``points``; parameter range [k, k+1]
    on the k-th segment.  Closed when the first and last points coincide."""
    if len(points) < 2:
        raise ValueError("polyline needs at least two points")
    segs = []
    for k, (z0, z1) in enumerate(zip(points, points[1:])):
        segs.extend(line_segment(z0, z1, float(k), float(k + 1)).segments)
    closed = abs(complex(points[-1]) - complex(points[0])) <= JOINT_TOL
    return ParametricCurve(tuple(segs), closed=closed)


# --------------------------------------------------------------------------
# Curve mini-language:
#   segment x0 y0 x1 y1
#   circle cx cy r
#   arc cx cy r t0 t1
#   param <x-expr> <y-expr> <t0> <t1>      (expressions without spaces)
#   polyline x0 y0 x1 y1 x2 y2 ...


def _real_arg(token: str, what: str) -> float:
    try:
        value = parse_complex_literal(token)
    except (ParseError, EvaluationError) as exc:
        raise ParseError(f"bad {what} {token!r}: {exc}") from None
    if value.imag != 0.0:
        raise ParseError(f"{what} must be real, got {token!r}")
    return value.real


def parse_curve_spec(text: str) -> ParametricCurve:
    """Build a curve from the mini-language above.

    Numeric arguments accept constant expressions (``pi/2``, ``2*pi``).
    """
    words = text.split()
    if not words:
        raise ParseError("empty curve specification")
    kind, args = words[0], words[1:]
    try:
        if kind == "segment":
            if len(args) != 4:
                raise ParseError("segment needs: x0 y0 x1 y1")
            x0, y0, x1, y1 = (_real_arg(a, "coordinate") for a in args)
            return line_segment(complex(x0, y0), complex(x1, y1))
        if kind == "circle":
            if len(args) != 3:
                raise ParseError("circle needs: cx cy r")
            cx, cy, r = (_real_arg(a, "circle parameter") for a in args)
            return circle(cx, cy, r)
        if kind == "arc":
            if len(args) != 5:
                raise ParseError("arc needs: cx cy r t0 t1")
            cx, cy, r, t0, t1 = (_real_arg(a, "arc parameter") for a in args)
            return arc(cx, cy, r, t0, t1)
        if kind == "param":
            if len(args) != 4:
                raise ParseError("param needs: x-expr y-expr t0 t1")
            t0 = _real_arg(args[2], "parameter bound")
            t1 = _real_arg(args[3], "parameter bound")
            return parametric(args[0], args[1], t0, t1)
        if kind == "polyline":
            if len(args) < 4 or len(args) % 2 != 0:
                raise ParseError("polyline needs an even number (>= 4) of coordinates")
            coords = [_real_arg(a, "coordinate") for a in args]
            pts = [complex(x, y) for x, y in zip(coords[::2], coords[1::2])]
            return polyline(pts)
    except ValueError as exc:
        raise ParseError(f"invalid curve: {exc}") from None
    raise ParseError(f"unknown curve kind {kind!r}")
