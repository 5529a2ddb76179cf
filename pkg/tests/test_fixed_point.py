
import numpy as np
import pytest
from hypothesis import given, settings
from scipy.optimize import root

from qsodyn.core import SimplexPoint
from qsodyn.errors import DomainViolation, OutOfRange, ToleranceNotReached
from qsodyn.family import apply, apply_array, make_params, phi
from qsodyn.fixed_point import (
    FixedPointReport,
    SolverCase,
    admissible_interval,
    branch_curves,
    branch_upper,
    closed_form_fixed_point,
    closed_form_x3,
    find_fixed_points,
    fixed_point_residual,
    expanded_x1_variant,
    reduced_f,
    scalar_residual,
    solve_x3,
    x1_of_x3,
    x2_of_x3,
)

from conftest import params


def residual_sign_changes(p, n=2000):
    lo, hi = admissible_interval(p)
    v = scalar_residual(p, np.linspace(lo, hi, n))
    s = np.sign(v)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def independent_fixed_point(p, x0):
    """Newton-type root of V(x) - x on the plane x1 + x2 + x3 = 1 (scipy hybr)."""

    def g(y):
        x = np.array([y[0], y[1], 1.0 - y[0] - y[1]])
        v = np.array(apply(p, SimplexPoint.from_seq(np.clip(x, 0, None), renormalize=True)).as_tuple())
        return (v - x)[:2]

    sol = root(g, x0[:2], tol=1e-14)
    return sol.success, np.array([sol.x[0], sol.x[1], 1.0 - sol.x[0] - sol.x[1]])


def test_worked_example_centre():
    rep = find_fixed_points(make_params(1, "3/8", "5/8", 0))
    assert rep.solver_case is SolverCase.CASE1_GENERAL
    assert rep.points[0].distance(SimplexPoint(1 / 3, 1 / 3, 1 / 3)) < 1e-12
    assert rep.residuals[0] < 1e-10


@pytest.mark.parametrize(
    "a, alpha, case",
    [
        (0.4, 0.6, SolverCase.CASE1_GENERAL),
        (0.0, 0.6, SolverCase.CASE2_ALPHA_ONLY),
        (0.4, 0.0, SolverCase.CASE3_A_ONLY),
        (0.0, 0.0, SolverCase.CASE4_CLOSED_FORM),
    ],
)
def test_cases_against_independent_root(a, alpha, case):
    p = make_params(a, alpha, 0.3, 0.25)
    rep = find_fixed_points(p)
    assert rep.solver_case is case
    ok, x = independent_fixed_point(p, np.array([1 / 3, 1 / 3, 1 / 3]))
    assert ok
    assert np.max(np.abs(x - rep.points[0].as_array())) < 1e-10


@settings(max_examples=300, deadline=None)
@given(params(e_max=0.99))
def test_unique_root_with_small_residual(p):
    rep = find_fixed_points(p)
    assert len(rep.points) == 1
    assert rep.residuals[0] < 1e-10
    assert residual_sign_changes(p) == 1
    rep.check(p)


@settings(max_examples=100, deadline=None)
@given(params(alpha=0.0, a=0.0, e_max=0.999))
def test_closed_form_matches_generic_solver(p):
    closed = closed_form_fixed_point(p.d, p.e)
    x3 = solve_x3(p)
    assert abs(closed.x3 - x3) < 1e-12
    assert abs(closed.x1 - x1_of_x3(p, x3)) < 1e-10
    assert fixed_point_residual(p, closed) < 1e-10


@pytest.mark.parametrize("e", [0.0, 0.25, 0.5, 0.99])
def test_closed_form_x3_fixes_phi(e):
    x = closed_form_x3(e)
    assert abs(phi(e, x) - x) < 1e-15


@pytest.mark.parametrize("d, e", [(0.1, 0.2), (0.5, 0.3), (0.0, 0.0), (0.3, 0.6)])
@pytest.mark.parametrize("coef", [24.0, 25.0])
def test_alternative_x1_coefficients_are_not_fixed_points(d, e, coef):
    p = make_params(0, 0, None, d, e)
    x3 = closed_form_x3(e)
    x1 = expanded_x1_variant(d, e, coef)
    x = np.array([x1, 1 - x1 - x3, x3])
    assert np.max(np.abs(apply_array(p, x) - x)) > 1e-3


class TestDoubleFixedPoint:
    def test_alpha_a_zero(self):
        rep = find_fixed_points(make_params(0, 0, 0, 0))
        assert rep.solver_case is SolverCase.E1_DOUBLE
        assert [pt.as_tuple() for pt in rep.points] == [(0.25, 0.25, 0.5), (0.0, 0.0, 1.0)]

    @pytest.mark.parametrize("a, alpha", [(0.3, 0.7), (0.0, 0.5), (0.5, 0.0)])
    def test_general(self, a, alpha):
        p = make_params(a, alpha, 0, 0)
        rep = find_fixed_points(p)
        assert len(rep.points) == 2
        assert rep.points[1].as_tuple() == (0.0, 0.0, 1.0)
        assert rep.points[0].x3 < 1.0 - 1e-6
        assert max(rep.residuals) < 1e-10


def test_reduced_f_fixes_x3():
    p = make_params(0.4, 0.7, 0.2, 0.5)
    x3 = find_fixed_points(p).points[0].x3
    assert abs(reduced_f(p, x3) - x3) < 1e-12


def test_reduced_f_needs_both_weights():
    with pytest.raises(DomainViolation):
        reduced_f(make_params(0, 0.5, 0.2, 0.2), 0.3)


@pytest.mark.parametrize("alpha, e", [(1e-4, 0.18), (0.3, 0.5), (0.9, 0.0)])
def test_branch_curve_meets_diagonal_at_solution(alpha, e):
    p = make_params(0, alpha, (1 - e) / 2, None, e)
    x3 = find_fixed_points(p).points[0].x3
    fp, fm = branch_curves(p, np.array([x3]))
    assert min(abs(fp[0] - x3), abs(fm[0] - x3)) < 1e-9


def test_branch_curve_hits_one_at_e1():
    p = make_params(0, 1e-4, 0, 0)
    fp, _ = branch_curves(p, np.array([1.0]))
    assert fp[0] == pytest.approx(1.0, abs=1e-12)


def test_branch_curves_regime():
    with pytest.raises(DomainViolation):
        branch_curves(make_params(0.2, 0.5, 0.1, 0.1), 0.5)


@pytest.mark.parametrize("coef", [0.0, 1e-12, 0.3, 1.0])
def test_branch_upper_is_positive_root(coef):
    u = branch_upper(coef)
    assert abs(1 - u - coef * u * u) < 1e-12


def test_domain_errors():
    p = make_params(0.2, 0.2, 1.0, 0.0)
    with pytest.raises(DomainViolation):
        x2_of_x3(p, 0.9)
    with pytest.raises(OutOfRange):
        closed_form_fixed_point(0.1, 1.0)
    with pytest.raises(OutOfRange):
        find_fixed_points(p, tol_fp=0.0)


def test_report_round_trip_and_check():
    p = make_params(0.3, 0.2, 0.4, 0.1)
    rep = find_fixed_points(p)
    again = FixedPointReport.from_dict(rep.to_dict())
    assert again == rep
    again.check(p)
    with pytest.raises(ToleranceNotReached):
        FixedPointReport((SimplexPoint(1, 0, 0),), (0.1,), SolverCase.CASE1_GENERAL)
