import cmath
import math

import numpy as np
import pytest

from mulint.errors import BranchJumpError, NonPositiveValueError, ZeroValueError
from mulint.expr import Const, Var, bind_constants, evaluate, parse_expression
from mulint.starcalc import (
    PolarDecomposition,
    check_star_cr_relations,
    polar_decompose,
    real_star_partial,
    star_derivative,
    star_derivative_expr,
)


def _f(source, **constants):
    return bind_constants(parse_expression(source, {"z"} | set(constants)), constants)


class TestStarDerivative:
    def test_exp_cz_is_constant_e_to_c(self):
        f = _f("exp(c*z)", c=2 + 1j)
        for z in (0j, 1 + 1j, -2.5 + 0.3j):
            assert cmath.isclose(star_derivative(f, z), cmath.exp(2 + 1j), rel_tol=1e-12)

    def test_exp_c_exp_z_is_own_star_derivative(self):
        f = _f("exp(exp(z))")
        z = 0.3 + 0.4j
        assert cmath.isclose(star_derivative(f, z), evaluate(f, {"z": z}), rel_tol=1e-12)

    def test_identity_has_essential_singularity_form(self):
        got = star_derivative(Var("z"), 2j)
        assert cmath.isclose(got, cmath.exp(1 / 2j), rel_tol=1e-14)
        assert cmath.isclose(got, cmath.exp(-0.5j), rel_tol=1e-14)

    def test_vanishing_function_rejected(self):
        with pytest.raises(ZeroValueError):
            star_derivative(Var("z"), 0j)

    def test_constant_is_exactly_one(self):
        for c in (3 + 0j, -2 + 5j, 0.001j):
            assert abs(star_derivative(Const(c), 1.3 - 0.4j) - 1.0) <= 1e-15

    def test_multiplicativity_at_random_points(self):
        f = _f("exp(z^2+1)")
        g = _f("exp(c*z)", c=0.5 - 1j)
        fg = _f("exp(z^2+1)*exp(c*z)", c=0.5 - 1j)
        rng = np.random.default_rng(7)
        for _ in range(50):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            lhs = star_derivative(fg, z)
            rhs = star_derivative(f, z) * star_derivative(g, z)
            assert abs(lhs - rhs) <= 1e-10 * abs(rhs)

    def test_star_expr_of_constant_folds_to_one(self):
        assert star_derivative_expr(Const(3 + 0j)) == Const(1 + 0j)


class TestPolarDecompose:
    def test_unit_imaginary(self):
        assert polar_decompose(Var("z"), 1j) == PolarDecomposition(1.0, math.pi / 2)

    def test_positive_real(self):
        got = polar_decompose(_f("exp(z)"), 1 + 0j)
        assert math.isclose(got.modulus, math.e, rel_tol=1e-15)
        assert got.argument == 0.0

    def test_branch_boundary_is_plus_pi(self):
        got = polar_decompose(Var("z"), -1 + 0j)
        assert got == PolarDecomposition(1.0, math.pi)

    def test_zero_rejected(self):
        with pytest.raises(ZeroValueError):
            polar_decompose(Var("z"), 0j)


def _g(source):
    return parse_expression(source, {"x", "y"})


class TestRealStarPartial:
    def test_exp_x(self):
        got = real_star_partial(_g("exp(x)"), (0.3, -1.2), "x")
        assert math.isclose(got, math.e, rel_tol=1e-9)

    def test_exp_xy_analytic_and_fd_cross_check(self):
        # analytic: d/dx (x*y) = y = 2, so the result is e^2
        got = real_star_partial(_g("exp(x*y)"), (1.0, 2.0), "x")
        assert math.isclose(got, math.exp(2.0), rel_tol=1e-8)
        # cross-check with an independent step size
        other = real_star_partial(_g("exp(x*y)"), (1.0, 2.0), "x", h=1e-5)
        assert math.isclose(got, other, rel_tol=1e-8)

    def test_constant_gives_one(self):
        for axis in ("x", "y"):
            assert math.isclose(real_star_partial(_g("5"), (0.0, 0.0), axis), 1.0, rel_tol=1e-12)

    def test_non_positive_rejected(self):
        with pytest.raises(NonPositiveValueError):
            real_star_partial(_g("x-10"), (0.0, 0.0), "x")

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            real_star_partial(_g("exp(x)"), (0.0, 0.0), "t")


class TestStarCRRelations:
    def test_exp_cz_closed_forms(self):
        # |f*| = e^{Re c} and arg f* = Im c (mod 2*pi)
        f = _f("exp(c*z)", c=1.2 - 0.9j)
        for z in (0.4 + 0.2j, -1 + 1j):
            report = check_star_cr_relations(f, z)
            assert report.max_residual < 1e-6

    def test_identity_at_1_plus_i(self):
        report = check_star_cr_relations(Var("z"), 1 + 1j)
        assert report.max_residual < 1e-5

    def test_constant(self):
        report = check_star_cr_relations(Const(3 + 0j), 0.7 - 0.1j)
        assert report.max_residual < 1e-10

    def test_modulus_matches_r_star_x_at_random_points(self):
        f = _f("exp(z^2+1)")
        rng = np.random.default_rng(11)
        for _ in range(20):
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            report = check_star_cr_relations(f, z)
            assert report.modulus_vs_r_x < 1e-5
            assert report.argument_mod_2pi < 1e-5

    def test_stencil_near_branch_cut_unwraps(self):
        # f = z just below the negative real axis: principal args straddle
        # the cut, a single 2*pi correction resolves it
        report = check_star_cr_relations(Var("z"), complex(-2.0, 1e-8))
        assert report.max_residual < 1e-5

    def test_unresolvable_jump_raises(self):
        # phase winds by ~8 radians across the stencil: unwrapping is ambiguous
        f = _f("exp(c*z)", c=complex(0.0, 4e6))
        with pytest.raises(BranchJumpError):
            check_star_cr_relations(f, 0.5 + 0j, h=1e-6)
