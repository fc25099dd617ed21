import math

import numpy as np
import pytest

from coneineq import geometry
from coneineq.constants import derive_params


def test_quadrant_contains():
    cone = geometry.Cone.quadrant()
    assert cone.contains(np.array([1.0, 2.0]))
    assert not cone.contains(np.array([-1.0, 2.0]))
    inside = cone.contains(np.array([[1.0, 1.0], [1.0, -1.0], [0.5, 3.0]]))
    assert list(inside) == [True, False, True]


def test_halfspace_cone_contains():
    s = 1.0 / math.sqrt(2.0)
    cone = geometry.Cone.from_halfspaces([[s, s]])
    assert cone.contains(np.array([1.0, 0.0]))
    assert not cone.contains(np.array([-1.0, -1.0]))


def test_monomial_weight_value_gradient():
    w = geometry.monomial_weight([2.0, 1.0])
    x = np.array([[2.0, 3.0]])
    assert w.degree == 3.0
    assert w.value(x)[0] == pytest.approx(12.0, rel=1e-14)
    assert np.allclose(w.gradient(x)[0], [12.0, 4.0], rtol=1e-14)


def test_monomial_weight_rejects_negative_exponent():
    with pytest.raises(ValueError):
        geometry.monomial_weight([-0.5, 0.0])


def test_omega_se_quadrant_xy(quadrant, quadrant_grid, xy_weight):
    # int_0^{pi/2} cos t sin t dt = 1/2
    val = geometry.omega_SE(xy_weight, quadrant, quadrant_grid)
    assert val == pytest.approx(0.5, abs=1e-12)
    mass = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    assert mass == pytest.approx(0.125, abs=1e-12)


def test_omega_se_full_circle(full_plane, full_plane_grid):
    w = geometry.constant_weight(2)
    val = geometry.omega_SE(w, full_plane, full_plane_grid)
    assert val == pytest.approx(2 * math.pi, rel=1e-12)


def test_gaussian_plane_integral(full_plane, full_plane_grid):
    w = geometry.constant_weight(2)
    val = geometry.cone_integral(
        lambda x: np.exp(-np.sum(x * x, axis=-1)), w, full_plane,
        full_plane_grid)
    assert val == pytest.approx(math.pi, rel=1e-12)


def test_gaussian_closed_form_vs_quadrature(full_plane, full_plane_grid):
    w = geometry.constant_weight(2)
    params = derive_params(2, 2.0, 0.9)
    val = geometry.gaussian_radial_integral(1.0, 0.0, params, w, full_plane,
                                            full_plane_grid)
    assert val == pytest.approx(math.pi, rel=1e-12)


def test_beta_radial_integral_quadrant(quadrant, quadrant_grid, xy_weight):
    params = derive_params(2, 2.0, 0.8)
    lam, c, q, s = 1.3, 0.7, 5.0, 1.0
    exact = geometry.beta_radial_integral(lam, c, q, s, params, xy_weight,
                                          quadrant, quadrant_grid)
    quad = geometry.cone_integral(
        lambda x: (lam + c * np.linalg.norm(x, axis=-1) ** 2) ** (-q)
        * np.linalg.norm(x, axis=-1) ** s,
        xy_weight, quadrant, quadrant_grid)
    assert quad == pytest.approx(exact, rel=1e-9)


def test_compact_radial_integral_quadrant(quadrant, quadrant_grid,
                                          xy_weight):
    params = derive_params(2, 2.0, 2.0)  # pprime = 2
    lam, alpha, q, s = 2.0, 1.0 / 3.0, 1.5, 0.0
    exact = geometry.compact_radial_integral(lam, alpha, q, s, params,
                                             xy_weight, quadrant,
                                             quadrant_grid)
    radius = (lam / (1 - alpha)) ** 0.5

    def integrand(x):
        r = np.linalg.norm(x, axis=-1)
        return np.clip(lam - (1 - alpha) * r ** 2, 0.0, None) ** q

    quad = geometry.cone_integral(integrand, xy_weight, quadrant,
                                  quadrant_grid, support_radius=radius)
    assert quad == pytest.approx(exact, rel=1e-9)


def test_beta_radial_integral_divergence_guard(quadrant, quadrant_grid,
                                               xy_weight):
    params = derive_params(2, 2.0, 0.8)
    with pytest.raises(ValueError):
        geometry.beta_radial_integral(1.0, 1.0, 1.0, 0.0, params, xy_weight,
                                      quadrant, quadrant_grid)


def test_sphere_quadrature_n3_octant():
    cone = geometry.Cone.orthant([True, True, True])
    grid = geometry.sphere_cone_quadrature(cone, 24)
    w = geometry.constant_weight(3)
    # octant area = 4 pi / 8
    assert geometry.omega_SE(w, cone, grid) == pytest.approx(
        math.pi / 2, rel=1e-10)
    wx = geometry.monomial_weight([1.0, 0.0, 0.0])
    # int_{S^2 cap octant} x dS = pi/4
    assert geometry.omega_SE(wx, cone, grid) == pytest.approx(
        math.pi / 4, rel=1e-10)


def test_sphere_quadrature_high_dim_area():
    cone = geometry.Cone.full(4)
    grid = geometry.sphere_cone_quadrature(cone, 64)
    w = geometry.constant_weight(4)
    assert geometry.omega_SE(w, cone, grid) == pytest.approx(
        2 * math.pi ** 2, rel=1e-12)


def test_cone_integral_diagnostics(quadrant, quadrant_grid, xy_weight):
    val, diag = geometry.cone_integral(
        lambda x: np.exp(-np.sum(x * x, axis=-1)), xy_weight, quadrant,
        quadrant_grid, full_output=True)
    assert diag.converged
    assert val == pytest.approx(0.25, rel=1e-10)  # int xy e^{-|x|^2} = 1/4
