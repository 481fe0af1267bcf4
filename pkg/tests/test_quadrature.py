import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from janossy.errors import InvalidArgumentError, NumericError
from janossy.quadrature import gauss_legendre, integrate


def test_one_point_rule_is_midpoint():
    r = gauss_legendre(1)
    assert r.nodes.tolist() == [0.0]
    assert r.weights.tolist() == [2.0]


def test_two_point_rule():
    r = gauss_legendre(2)
    np.testing.assert_allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=0, atol=2e-16)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], rtol=0, atol=4e-16)


def test_five_point_rule_closed_form():
    r = gauss_legendre(5)
    inner = math.sqrt(5 - 2 * math.sqrt(10 / 7)) / 3
    outer = math.sqrt(5 + 2 * math.sqrt(10 / 7)) / 3
    np.testing.assert_allclose(r.nodes, [-outer, -inner, 0.0, inner, outer], rtol=0, atol=4e-16)
    w_in = (322 + 13 * math.sqrt(70)) / 900
    w_out = (322 - 13 * math.sqrt(70)) / 900
    np.testing.assert_allclose(r.weights, [w_out, w_in, 128 / 225, w_in, w_out], rtol=0, atol=4e-16)


def test_x_squared_on_unit_interval():
    assert abs(integrate(gauss_legendre(5, 0.0, 1.0), lambda x: x**2) - 1 / 3) < 1e-14


def test_sine_over_half_period():
    for m in (10, 20, 50):
        assert abs(integrate(gauss_legendre(m, 0.0, math.pi), np.sin) - 2.0) < 1e-12


def test_constant_gives_length():
    assert integrate(gauss_legendre(37, 0.0, 1.0), lambda x: 1.0) == pytest.approx(1.0, abs=4e-16)


def test_odd_integrand_vanishes():
    assert abs(integrate(gauss_legendre(31), lambda x: x**3 - np.sin(x))) < 1e-15


def test_doubling_order_plateau():
    for m in (20, 40, 100):
        a = integrate(gauss_legendre(m, 0, math.pi), np.sin)
        b = integrate(gauss_legendre(2 * m, 0, math.pi), np.sin)
        assert abs(a - b) < 1e-13


@pytest.mark.parametrize("m", [3, 8, 51, 200, 400])
def test_rule_invariants(m):
    r = gauss_legendre(m, -2.5, 7.0)
    assert np.all(np.diff(r.nodes) > 0)
    assert r.nodes[0] > -2.5 and r.nodes[-1] < 7.0
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - 9.5) <= 1e-14 * 9.5


@pytest.mark.parametrize("m", [2, 7, 64, 200, 301])
def test_symmetric_rule_mirror_exact(m):
    r = gauss_legendre(m)
    assert np.max(np.abs(r.nodes + r.nodes[::-1])) <= 1e-15
    assert np.max(np.abs(r.weights - r.weights[::-1])) <= 1e-15


@pytest.mark.parametrize("m", [12, 60])
def test_nodes_and_weights_against_high_precision(m):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    r = gauss_legendre(m)
    for x, w in zip(r.nodes, r.weights):
        root = mp.findroot(lambda t: mp.legendre(m, t), mp.mpf(x))
        dp = mp.diff(lambda t: mp.legendre(m, t), root)
        assert abs(x - float(root)) <= 2 * np.spacing(max(abs(x), 1e-2))
        assert abs(w / float(2 / ((1 - root**2) * dp**2)) - 1) <= 1e-13


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 60), deg=st.integers(0, 119), lo=st.floats(-5, 5), width=st.floats(0.1, 10))
def test_polynomial_exactness(m, deg, lo, width):
    deg = min(deg, 2 * m - 1)
    hi = lo + width
    r = gauss_legendre(m, lo, hi)
    # integrate the shifted monomial ((x - c)/h)^deg, which stays O(1) on the interval
    c, h = 0.5 * (lo + hi), 0.5 * width
    exact = h * (0.0 if deg % 2 else 2.0 / (deg + 1))
    got = integrate(r, lambda x: ((x - c) / h) ** deg)
    assert abs(got - exact) <= 1e-13 * max(1.0, width)


def test_rules_are_cached_and_read_only():
    a = gauss_legendre(200, -1.0, 2.0)
    assert a is gauss_legendre(200, -1, 2)
    with pytest.raises(ValueError):
        a.nodes[0] = 0.0


@pytest.mark.parametrize("m,lo,hi", [(0, -1, 1), (-3, -1, 1), (2.5, -1, 1), (4, 1, 1), (4, 2, 1), (4, 0, math.inf)])
def test_invalid_arguments(m, lo, hi):
    with pytest.raises(InvalidArgumentError):
        gauss_legendre(m, lo, hi)


def test_non_finite_integrand_names_node():
    r = gauss_legendre(4, 0, 1)
    with pytest.raises(NumericError, match="x="), np.errstate(divide="ignore"):
        integrate(r, lambda x: 1.0 / (x - r.nodes[2]))
