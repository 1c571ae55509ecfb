"""Multiplicative derivatives.

The multiplicative derivative of a nowhere-vanishing differentiable f is
exp(f'(z)/f(z)).  For the modulus/argument decomposition R = |f|,
Theta = Arg f, the real partial multiplicative derivatives of R and
exp(Theta) reproduce |f*| while the ordinary partials of Theta and ln R
reproduce arg f* up to multiples of 2*pi; ``check_star_cr_relations``
measures all four residuals with central finite differences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BranchJumpError, NonPositiveValueError, ZeroValueError
from .expr import Call, Div, Expr, differentiate, evaluate, principal_arg, simplify

TWO_PI = 2.0 * math.pi
DEFAULT_FD_STEP = 1e-6


def _nonzero(w: complex, what: str = "f(z)") -> complex:
    if abs(w) <= 1e-12 * (1.0 + abs(w)):
        raise ZeroValueError(f"{what} vanishes; multiplicative derivative undefined")
    return w


@dataclass(frozen=True)
class PolarDecomposition:
    """Modulus and principal argument of a nonzero value."""

    modulus: float
    argument: float  # in (-pi, pi]


def star_derivative_expr(f: Expr, var: str = "z") -> Expr:
    """The multiplicative derivative as an expression: exp(f'/f)."""
    return simplify(Call("exp", Div(differentiate(f, var), f)))


def star_derivative(f: Expr, z: complex, var: str = "z") -> complex:
    """exp(f'(z)/f(z)) with f' obtained symbolically."""
    w = _nonzero(evaluate(f, {var: z}))
    fp = evaluate(differentiate(f, var), {var: z})
    return cmath.exp(fp / w)


def polar_decompose(f: Expr, z: complex, var: str = "z") -> PolarDecomposition:
    w = _nonzero(evaluate(f, {var: z}))
    return PolarDecomposition(abs(w), principal_arg(w))


def real_star_partial(
    g: Expr,
    point: tuple[float, float],
    axis: str,
    h: float = DEFAULT_FD_STEP,
) -> float:
    """Multiplicative partial derivative of a positive function of (x, y):
    exp(d ln g / d axis) estimated with a central difference of step h."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    x, y = point
    values = []
    for sign in (1.0, -1.0):
        px = x + sign * h if axis == "x" else x
        py = y + sign * h if axis == "y" else y
        w = evaluate(g, {"x": complex(px), "y": complex(py)})
        if w.real <= 0.0 or abs(w.imag) > 1e-12 * (1.0 + abs(w.real)):
            raise NonPositiveValueError(
                f"g({px}, {py}) = {w} is not positive; *derivative needs g > 0"
            )
        values.append(w.real)
    return math.exp((math.log(values[0]) - math.log(values[1])) / (2.0 * h))


@dataclass(frozen=True)
class StarCRReport:
    """Residuals of the modulus/argument relations at one point."""

    modulus_vs_r_x: float
    modulus_vs_exp_theta_y: float
    argument_mod_2pi: float
    cross_partials: float

    @property
    def max_residual(self) -> float:
        return max(
            self.modulus_vs_r_x,
            self.modulus_vs_exp_theta_y,
            self.argument_mod_2pi,
            self.cross_partials,
        )


def _unwrap_near(theta: float, anchor: float) -> float:
    """Shift theta by one multiple of 2*pi to sit next to anchor."""
    k = round((anchor - theta) / TWO_PI)
    if abs(k) >= 2:
        raise BranchJumpError(
            "phase jump across the stencil exceeds a single 2*pi correction"
        )
    return theta + TWO_PI * k


def check_star_cr_relations(
    f: Expr,
    z: complex,
    h: float = DEFAULT_FD_STEP,
    var: str = "z",
) -> StarCRReport:
    """Finite-difference consistency check between f* and the partial
    (multiplicative) derivatives of R = |f| and Theta = arg f.

    Theta is unwrapped across the five-point stencil so a branch cut of the
    principal argument does not fake a residual.
    """
    fstar = star_derivative(f, z, var)
    x, y = z.real, z.imag

    def sample(px: float, py: float) -> complex:
        return _nonzero(evaluate(f, {var: complex(px, py)}), "f near z")

    w_c = sample(x, y)
    w_xp, w_xm = sample(x + h, y), sample(x - h, y)
    w_yp, w_ym = sample(x, y + h), sample(x, y - h)

    # aliasing guard: for holomorphic f, |ln R| movement along one axis equals
    # the phase movement along the other; past pi the stencil phases cannot be
    # unwrapped reliably
    dx_lnr = abs(math.log(abs(w_xp)) - math.log(abs(w_xm)))
    dy_lnr = abs(math.log(abs(w_yp)) - math.log(abs(w_ym)))
    if max(dx_lnr, dy_lnr) >= math.pi:
        raise BranchJumpError(
            "phase moves by more than pi across the stencil; shrink h"
        )

    th_c = principal_arg(w_c)
    th_xp = _unwrap_near(principal_arg(w_xp), th_c)
    th_xm = _unwrap_near(principal_arg(w_xm), th_c)
    th_yp = _unwrap_near(principal_arg(w_yp), th_c)
    th_ym = _unwrap_near(principal_arg(w_ym), th_c)

    r_star_x = math.exp((math.log(abs(w_xp)) - math.log(abs(w_xm))) / (2.0 * h))
    exp_theta_star_y = math.exp((th_yp - th_ym) / (2.0 * h))
    theta_x = (th_xp - th_xm) / (2.0 * h)
    ln_r_y = (math.log(abs(w_yp)) - math.log(abs(w_ym))) / (2.0 * h)

    arg_gap = theta_x - principal_arg(fstar)
    arg_residual = abs(arg_gap - TWO_PI * round(arg_gap / TWO_PI))

    return StarCRReport(
        modulus_vs_r_x=abs(abs(fstar) - r_star_x),
        modulus_vs_exp_theta_y=abs(abs(fstar) - exp_theta_star_y),
        argument_mod_2pi=arg_residual,
        cross_partials=abs(theta_x + ln_r_y),
    )
