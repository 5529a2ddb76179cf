import math

import numpy as np
import pytest
from hypothesis import given, settings

from qsodyn.core import SimplexPoint, apply_tensor
from qsodyn.errors import ConstraintViolation, OutOfRange, ParseError
from qsodyn.family import (
    FamilyParams,
    apply,
    apply_array,
    make_params,
    parse_number,
    phi,
    phi_prime,
    reduced_2d,
    to_tensor,
)

from conftest import params, simplex_points


@pytest.mark.parametrize(
    "text, want",
    [("5/8", 0.625), (" 0.375 ", 0.375), ("1", 1.0), ("1/3", 1 / 3), (0.5, 0.5), (1, 1.0)],
)
def test_parse_number(text, want):
    assert parse_number(text) == want


@pytest.mark.parametrize("text", ["", "abc", "1/0", "0.5.5"])
def test_parse_number_rejects(text):
    with pytest.raises(ParseError):
        parse_number(text)


class TestMakeParams:
    def test_derives_e(self):
        p = make_params(1, "3/8", "5/8", 0)
        assert (p.b, p.beta, p.e) == (0.0, 0.625, 0.375)

    @pytest.mark.parametrize("missing", ["c", "d"])
    def test_derives_c_or_d(self, missing):
        kw = dict(c=0.2, d=0.3, e=0.5)
        kw.pop(missing)
        p = make_params(0.1, 0.2, **kw)
        assert (p.c, p.d) == pytest.approx((0.2, 0.3), abs=1e-15)

    def test_underdetermined(self):
        with pytest.raises(ConstraintViolation):
            make_params(0, 0, c=0.5)

    def test_sum_checked_when_all_given(self):
        with pytest.raises(ConstraintViolation):
            make_params(0, 0, 0.5, 0.5, 0.5)

    def test_negative_e(self):
        with pytest.raises(ConstraintViolation):
            make_params(0, 0, 0.7, 0.7)

    @pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan"), float("inf")])
    def test_out_of_range(self, bad):
        with pytest.raises(OutOfRange):
            make_params(bad, 0, 0, 0)

    def test_direct_constructor_validates(self):
        with pytest.raises(ConstraintViolation):
            FamilyParams(0, 0, 0.6, 0.6)
        with pytest.raises(OutOfRange):
            FamilyParams(0, 2, 0, 0)


def test_worked_example_maps_centre_to_itself():
    p = make_params(1, "3/8", "5/8", 0)
    centre = SimplexPoint(1 / 3, 1 / 3, 1 / 3)
    assert apply(p, centre).distance(centre) < 1e-15


@settings(max_examples=300, deadline=None)
@given(params(), simplex_points())
def test_apply_matches_tensor(p, x):
    assert apply(p, x).distance(apply_tensor(to_tensor(p), x)) < 1e-14


@settings(max_examples=300, deadline=None)
@given(params(), simplex_points())
def test_simplex_preserved(p, x):
    y = apply(p, x).as_tuple()
    assert min(y) >= 0.0
    assert abs(math.fsum(y) - 1.0) < 1e-14


@settings(max_examples=200, deadline=None)
@given(params(), simplex_points())
def test_reduced_map_matches_full(p, x):
    y = apply(p, x)
    r1, r2 = reduced_2d(p, x.x1, x.x2)
    assert abs(r1 - y.x1) < 1e-14 and abs(r2 - y.x2) < 1e-14


@settings(max_examples=200, deadline=None)
@given(params(alpha=0.0, a=0.0), simplex_points())
def test_third_coordinate_autonomous_when_alpha_a_zero(p, x):
    assert abs(apply(p, x).x3 - phi(p.e, x.x3)) < 1e-14


def test_third_coordinate_not_autonomous_in_general():
    # same x3, different (x1, x2): the image x3 differs once b or beta is not 1
    p = make_params(0.5, 0.0, 0.2, 0.3)
    u = apply(p, SimplexPoint(0.4, 0.1, 0.5)).x3
    v = apply(p, SimplexPoint(0.1, 0.4, 0.5)).x3
    assert abs(u - v) > 1e-3


@pytest.mark.parametrize("e", [0.0, 0.3, 1.0])
def test_phi_prime_by_finite_difference(e):
    xs = np.linspace(0.05, 0.95, 7)
    h = 1e-6
    fd = (phi(e, xs + h) - phi(e, xs - h)) / (2 * h)
    assert np.allclose(fd, phi_prime(e, xs), atol=1e-8)


def test_apply_array_vectorises():
    p = make_params(0.2, 0.4, 0.1, 0.3)
    xs = np.random.default_rng(0).dirichlet([1, 1, 1], size=50)
    ys = apply_array(p, xs)
    for x, y in zip(xs, ys):
        assert np.allclose(apply(p, SimplexPoint.from_seq(x)).as_array(), y, atol=1e-15)
