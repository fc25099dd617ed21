import math

import numpy as np
import pytest

from coneineq import specfun


def test_gamma_small_integers():
    for k in range(1, 10):
        assert specfun.gamma_fn(k) == pytest.approx(math.factorial(k - 1),
                                                    rel=1e-14)


def test_gamma_half():
    assert specfun.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi),
                                                  rel=1e-14)


def test_log_gamma_large_argument():
    # Stirling check at x = 1000
    x = 1000.0
    stirling = (x - 0.5) * math.log(x) - x + 0.5 * math.log(2 * math.pi)
    assert specfun.log_gamma(x) == pytest.approx(stirling, rel=1e-6)


def test_beta_symmetry_and_identity():
    a, b = 2.3, 4.7
    assert specfun.beta(a, b) == pytest.approx(specfun.beta(b, a), rel=1e-14)
    assert specfun.beta(a, b) == pytest.approx(
        specfun.gamma_fn(a) * specfun.gamma_fn(b) / specfun.gamma_fn(a + b),
        rel=1e-13)


def test_beta_integral_oracle():
    # B(3, 2) = 1/12
    assert specfun.beta(3.0, 2.0) == pytest.approx(1.0 / 12.0, rel=1e-14)


def test_log_beta_matches_quadrature():
    a, b = 1.7, 3.1
    t = np.linspace(1e-9, 1 - 1e-9, 200001)
    val = np.trapezoid(t ** (a - 1) * (1 - t) ** (b - 1), t)
    assert math.exp(specfun.log_beta(a, b)) == pytest.approx(val, rel=1e-5)


def test_domain_guards():
    with pytest.raises(ValueError):
        specfun.log_gamma(0.0)
    with pytest.raises(ValueError):
        specfun.log_gamma(-1.0)
    with pytest.raises(ValueError):
        specfun.gamma_fn(200.0)  # overflows double precision
    with pytest.raises(ValueError):
        specfun.log_beta(1.0, 0.0)
