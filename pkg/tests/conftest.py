import pytest

from coneineq import geometry


@pytest.fixture(scope="session")
def quadrant():
    return geometry.Cone.quadrant()


@pytest.fixture(scope="session")
def quadrant_grid(quadrant):
    return geometry.sphere_cone_quadrature(quadrant, 64)


@pytest.fixture(scope="session")
def xy_weight():
    return geometry.monomial_weight([1.0, 1.0])


@pytest.fixture(scope="session")
def full_plane():
    return geometry.Cone.full(2)


@pytest.fixture(scope="session")
def full_plane_grid(full_plane):
    return geometry.sphere_cone_quadrature(full_plane, 64)
