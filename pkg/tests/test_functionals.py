import math

import numpy as np
import pytest

from coneineq import constants, functionals, geometry
from coneineq.constants import derive_params


def _fd_gradient(u, x, h=1e-6):
    x = np.asarray(x, float)
    out = np.zeros_like(x)
    for i in range(x.shape[-1]):
        e = np.zeros_like(x)
        e[..., i] = h
        out[..., i] = (u.value(x + e) - u.value(x - e)) / (2 * h)
    return out


@pytest.mark.parametrize("family", ["power", "compact", "gaussian", "bump"])
def test_gradients_match_finite_differences(family):
    rng = np.random.default_rng(11)
    if family == "power":
        u = functionals.PowerExtremal(1.3, 0.7, (0.1, 0.2), 5.0 / 3.0, 2.0)
    elif family == "compact":
        u = functionals.CompactExtremal(1.1, 2.0, (0.0, 0.0), 1.0 / 3.0, 2.0)
    elif family == "gaussian":
        u = functionals.Gaussian(1.2, (0.0, 0.0), 2.0, 2.0, 4.0, 0.125)
    else:
        u = functionals.Bump((1.0, 1.3), 0.8, 3.0)
    pts = rng.uniform(0.3, 1.6, size=(100, 2))
    if family == "compact":
        pts = pts * 0.5  # keep points inside the support ball
    grad = u.gradient(pts)
    fd = _fd_gradient(u, pts)
    assert np.allclose(grad, fd, rtol=1e-6, atol=1e-6)


def test_x0_admissibility(quadrant):
    assert functionals.x0_admissible(quadrant, np.zeros(2))
    assert not functionals.x0_admissible(quadrant, np.array([1.0, 0.0]))
    half = geometry.Cone.from_halfspaces([[1.0, 0.0]])
    # translation along the free coordinate keeps the cone invariant
    assert functionals.x0_admissible(half, np.array([0.0, 3.0]))
    assert not functionals.x0_admissible(half, np.array([1.0, 0.0]))


def test_gaussian_is_normalized(quadrant, quadrant_grid, xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    for lam in (0.5, 2.0):
        u = functionals.Gaussian(lam, (0.0, 0.0), 2.0, 2.0, 4.0, bm)
        norm = functionals.weighted_Lq(u, 2.0, xy_weight, quadrant,
                                       quadrant_grid)
        assert norm == pytest.approx(1.0, abs=1e-12)


def test_gn_extremal_equality(quadrant, quadrant_grid, xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    for gamma in (0.8, 2.0):
        params = derive_params(2, 2.0, gamma)
        bundle = constants.constants_bundle(params, 2.0, 2.0, 2.0,
                                            ball_mass=bm)
        if gamma < 1:
            u = functionals.PowerExtremal(1.0, 1.0, (0.0, 0.0),
                                          params.alpha, params.pprime)
        else:
            u = functionals.CompactExtremal(1.0, 1.0, (0.0, 0.0),
                                            params.alpha, params.pprime)
        r = functionals.gn_ratio(u, xy_weight, xy_weight, xy_weight, bundle,
                                 params, quadrant, quadrant_grid)
        assert r.ratio == pytest.approx(1.0, abs=1e-10)


def test_gn_direction_for_bump(quadrant, quadrant_grid, xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    params = derive_params(2, 2.0, 0.8)
    bundle = constants.constants_bundle(params, 2.0, 2.0, 2.0, ball_mass=bm)
    u = functionals.Bump((1.2, 1.4), 0.8, 3.0)
    r = functionals.gn_ratio(u, xy_weight, xy_weight, xy_weight, bundle,
                             params, quadrant, quadrant_grid)
    assert r.ratio < 1.0


def test_log_sobolev_gaussian_deficit_vanishes(quadrant, quadrant_grid,
                                               xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    params = derive_params(2, 2.0, 1.0)
    for lam in (0.5, 1.0, 2.0):
        u = functionals.Gaussian(lam, (0.0, 0.0), 2.0, 2.0, 4.0, bm)
        d = functionals.log_sobolev_deficit(u, xy_weight, params, quadrant,
                                            quadrant_grid)
        assert abs(d) <= 1e-10


def test_log_sobolev_deficit_nonnegative(quadrant, quadrant_grid,
                                         xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    params = derive_params(2, 2.0, 1.0)
    base = functionals.Gaussian(1.0, (0.0, 0.0), 2.0, 2.0, 4.0, bm)
    u = functionals.Perturbed(base, 0.1, functionals.Bump((1.0, 1.0), 0.5,
                                                          2.0))
    d = functionals.log_sobolev_deficit(u, xy_weight, params, quadrant,
                                        quadrant_grid)
    assert d >= -1e-10


def test_faber_krahn_extremal(quadrant, quadrant_grid, xy_weight):
    params = derive_params(2, 2.0, 2.0)
    u = functionals.CompactExtremal(1.0, 1.0, (0.0, 0.0), 0.0,
                                    params.pprime)
    r = functionals.faber_krahn_ratio(u, xy_weight, params, quadrant,
                                      quadrant_grid)
    assert r.ratio == pytest.approx(1.0, abs=1e-10)


def test_faber_krahn_direction_indicatorless(quadrant, quadrant_grid,
                                             xy_weight):
    params = derive_params(2, 2.0, 2.0)
    u = functionals.Bump((1.0, 1.0), 0.7, 2.0)
    r = functionals.faber_krahn_ratio(u, xy_weight, params, quadrant,
                                      quadrant_grid)
    assert r.ratio <= 1.0 + 1e-10


def test_isoperimetric_centered_ball(quadrant, quadrant_grid, xy_weight):
    r = functionals.isoperimetric_ratio(np.zeros(2), 1.3, xy_weight,
                                        quadrant, quadrant_grid)
    assert r.ratio == pytest.approx(1.0, abs=1e-12)


def test_isoperimetric_shifted_ball_on_halfspace():
    half = geometry.Cone.from_halfspaces([[1.0, 0.0]])
    w = geometry.monomial_weight([1.0, 0.0])
    grid = geometry.sphere_cone_quadrature(half, 64)
    r = functionals.isoperimetric_ratio(np.array([0.0, 2.0]), 1.0, w, half,
                                        grid)
    assert r.ratio == pytest.approx(1.0, abs=1e-12)


def test_rescaling_invariance(quadrant, quadrant_grid, xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    params = derive_params(2, 2.0, 0.8)
    bundle = constants.constants_bundle(params, 2.0, 2.0, 2.0, ball_mass=bm)
    u = functionals.Bump((1.5, 1.2), 0.7, 3.0)
    q = params.alpha * params.p
    base_norm = functionals.weighted_Lq(u, q, xy_weight, quadrant,
                                        quadrant_grid)
    base_ratio = functionals.gn_ratio(u, xy_weight, xy_weight, xy_weight,
                                      bundle, params, quadrant,
                                      quadrant_grid).ratio
    for lam in (0.1, 10.0):
        v = functionals.rescale(u, lam, params, 2.0)
        norm = functionals.weighted_Lq(v, q, xy_weight, quadrant,
                                       quadrant_grid)
        ratio = functionals.gn_ratio(v, xy_weight, xy_weight, xy_weight,
                                     bundle, params, quadrant,
                                     quadrant_grid).ratio
        assert norm == pytest.approx(base_norm, abs=1e-10)
        assert ratio == pytest.approx(base_ratio, abs=1e-8)


def test_rigidity_probe_peaks_at_extremal(quadrant, quadrant_grid,
                                          xy_weight):
    bm = geometry.ball_cone_weight_mass(xy_weight, quadrant, quadrant_grid)
    params = derive_params(2, 2.0, 0.8)
    bundle = constants.constants_bundle(params, 2.0, 2.0, 2.0, ball_mass=bm)
    best = functionals.rigidity_deficit_probe(
        xy_weight, xy_weight, xy_weight, bundle, params, quadrant,
        quadrant_grid)
    assert best == pytest.approx(1.0, abs=1e-8)
