import math

import numpy as np
import pytest

from conftest import GUE_MOMENTS
from janossy import densities as D
from janossy.errors import DomainError, InvalidArgumentError
from janossy.nystrom import fredholm_logdet
from janossy.quadrature import gauss_legendre
from janossy.tw import janossy

A = D.DEFAULT_A_MAX


@pytest.fixture(scope="module")
def spacing():
    return D.spacing_density(np.linspace(0, A, 4001)[1:])


@pytest.fixture(scope="module")
def moments():
    return D.ratio_moments(4)


def test_spacing_vanishes_quadratically():
    s = np.array([1e-4, 1e-3, 1e-2])
    t = D.spacing_density(s)
    # lnJ on [0, s] starts at -s^3/(9 pi), so P = s^2/(3 pi) + ...
    np.testing.assert_allclose(t.values / s**2, 1 / (3 * math.pi), rtol=1e-3)
    assert t.values[0] < 1e-8


def test_spacing_normalization_and_mean(spacing):
    assert abs(spacing.normalization() - 1) < 1e-6
    assert abs(spacing.moment(1) - math.pi) < 1e-5


def test_spacing_mode_against_determinant_differences(spacing):
    i = int(np.argmax(spacing.values))
    s0 = float(spacing.grid[i])
    h = 1e-4
    fd = -(math.exp(fredholm_logdet((0, s0 + h))) - math.exp(fredholm_logdet((0, s0 - h)))) / (2 * h)
    assert fd == pytest.approx(spacing.values[i], rel=1e-5)


def test_nearest_neighbor():
    t = D.nearest_neighbor_density(np.linspace(0, A, 4001)[1:])
    assert t.meta["max_abs_V"] <= 1e-10
    assert abs(t.normalization() - 1) < 1e-6
    for t0 in (0.7, 1.5, 3.0):
        h = 1e-4
        fd = -(janossy(-t0 - h, t0 + h) - janossy(-t0 + h, t0 - h)) / (2 * h)
        v = D.nearest_neighbor_density([t0]).values[0]
        assert fd == pytest.approx(v, rel=1e-5)


def test_joint_reflection_symmetry():
    pts = np.array([(-0.5, 2.0), (-1.0, 3.5), (-4.0, 0.3), (-2.2, 2.2), (-6.0, 1.0)])
    a = D.joint_density(pts).values
    b = D.joint_density(np.column_stack([-pts[:, 1], -pts[:, 0]])).values
    np.testing.assert_allclose(a, b, rtol=1e-8, atol=1e-14)


def test_joint_normalization():
    a = np.linspace(0, A, 61)
    pts, shape = D.joint_grid(-a[::-1], a)
    t = D.joint_density(pts, shape=shape)
    assert abs(t.normalization() - 1) < 1e-5
    assert t.values.min() >= -1e-10
    # shared directions collapse into one solve each
    assert t.meta["rays"] < len(pts) / 1.5


def test_joint_grid_is_row_major():
    pts, shape = D.joint_grid([-2.0, -1.0], [0.5, 1.0, 1.5])
    assert shape == (2, 3)
    assert pts[:3, 0].tolist() == [-2.0] * 3 and pts[:3, 1].tolist() == [0.5, 1.0, 1.5]


def test_ratio_swap_symmetry_from_independent_solves():
    r = np.array([0.05, 0.3, 0.8, 1.7, 4.0, 12.0])
    p = D.ratio_density(r, use_symmetry=False).values
    q = D.ratio_density(1 / r, use_symmetry=False).values
    np.testing.assert_allclose(q, r**2 * p, rtol=1e-6)


def test_ratio_normalizations():
    def gl(lo, hi, m):
        q = gauss_legendre(m, lo, hi)
        return float(q.weights @ D.ratio_density(q.nodes).values)

    # mass beyond r_max is the mass below 1/r_max by the swap identity
    total = gl(0, 1, 80) + gl(1, 20, 200) + gl(0, 1 / 20, 40)
    assert abs(total - 1) < 1e-5
    rt = np.linspace(0, 1, 401)[1:]
    assert abs(D.ratio_tilde_density(rt).normalization() - 1) < 1e-5


def test_ratio_tilde_is_twice_ratio():
    x = np.array([0.1, 0.5, 0.9, 1.0])
    np.testing.assert_array_equal(D.ratio_tilde_density(x).values, 2 * D.ratio_density(x).values)


def test_moments_reference_values(moments):
    np.testing.assert_allclose(moments.values, GUE_MOMENTS, rtol=0, atol=1e-8)
    assert abs(moments.meta["normalization"] - 1) < 1e-6
    assert np.all(moments.est_error < 1e-10)
    assert 1 > moments[1] > moments[2] > moments[3] > moments[4] > 0


def test_moments_stable_under_cutoff_and_inner_order(moments):
    m2 = D.ratio_moments(4, a_max=8 * math.pi, inner_order=200)
    np.testing.assert_allclose(m2.values, moments.values, rtol=0, atol=1e-12)


def test_grid_refinement_stability():
    for grid in (np.linspace(0, A, 2001)[1:], np.linspace(0, 1, 801)[1:]):
        kind = D.spacing_density if grid[-1] > 1 else D.ratio_tilde_density
        a, b = kind(grid), kind(np.linspace(0, grid[-1], 2 * grid.size + 1)[1:])
        for k in (0, 1, 2):
            assert abs(a.moment(k) - b.moment(k)) < 1e-6


def test_unit_conversion(spacing):
    u = spacing.to_units("unit-mean")
    assert abs(u.moment(1) - 1) < 1e-5
    assert abs(u.normalization() - spacing.normalization()) < 1e-12
    np.testing.assert_allclose(u.grid * math.pi, spacing.grid, rtol=1e-15)
    back = u.to_units("kernel")
    np.testing.assert_allclose(back.values, spacing.values, rtol=1e-15)
    rt = D.ratio_tilde_density(np.linspace(0, 1, 101)[1:])
    ru = rt.to_units("unit-mean")
    for k in range(4):
        assert abs(ru.moment(k) - rt.moment(k)) <= 1e-12


def test_joint_unit_conversion_scales_by_pi_squared():
    pts, shape = D.joint_grid([-1.0, -2.0], [1.0, 3.0])
    t = D.joint_density(pts, shape=shape)
    u = t.to_units("unit-mean")
    np.testing.assert_allclose(u.values, t.values * math.pi**2, rtol=1e-15)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_surmise_normalized_and_swap_symmetric(beta):
    from scipy.integrate import quad
    total = quad(D.surmise_ratio, 0, 1, args=(beta,), epsabs=1e-15, epsrel=1e-13)[0] + \
        quad(D.surmise_ratio, 1, np.inf, args=(beta,), epsabs=1e-15, epsrel=1e-13)[0]
    assert abs(total - 1) < 1e-10
    r = np.array([0.01, 0.3, 2.0, 17.0])
    np.testing.assert_allclose(D.surmise_ratio(1 / r, beta), r**2 * D.surmise_ratio(r, beta), rtol=1e-13)


def test_surmise_constants_match_closed_forms():
    assert D.surmise_constant(1) == pytest.approx(27 / 8, rel=1e-12)
    assert D.surmise_constant(2) == pytest.approx(81 * math.sqrt(3) / (4 * math.pi), rel=1e-12)
    assert D.surmise_constant(4) == pytest.approx(729 * math.sqrt(3) / (4 * math.pi), rel=1e-12)


def test_surmise_gap(moments):
    rows = D.surmise_gap(moments, 2)
    k, exact, sm, gap = rows[0]
    assert k == 1 and exact == moments[1]
    assert 1e-3 < gap < 1e-2


@pytest.mark.parametrize("call", [
    lambda: D.ratio_density([25.0]),
    lambda: D.ratio_density([0.5, 20.5]),
])
def test_ratio_domain(call):
    with pytest.raises(DomainError):
        call()


@pytest.mark.parametrize("call", [
    lambda: D.ratio_moments(0),
    lambda: D.ratio_moments(9),
    lambda: D.ratio_moments(4, order=50),
    lambda: D.ratio_density([0.0]),
    lambda: D.ratio_tilde_density([1.5]),
    lambda: D.spacing_density([-1.0]),
    lambda: D.spacing_density([50.0]),
    lambda: D.joint_density([(0.5, 1.0)]),
    lambda: D.ratio_density([0.5], a_max=0),
    lambda: D.surmise_ratio(-1.0),
    lambda: D.surmise_constant(3),
    lambda: D.DensityTable("bogus", np.ones(2), np.ones(2)),
])
def test_invalid_arguments(call):
    with pytest.raises(InvalidArgumentError):
        call()
