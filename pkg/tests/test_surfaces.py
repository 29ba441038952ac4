import numpy as np
import pytest

from hypcs.errors import DomainError, NonConvexError
from hypcs.foliation import graph_jet
from hypcs.scenarios import Tube, paraboloid
from hypcs.spectral import ChartGrid
from hypcs.surfaces import (
    SurfaceChart,
    check_convexity,
    fd_jet,
    fundamental_forms,
    geometry_from_forms,
    integrate_surface,
    leaf_forms,
    principal_curvatures,
)

U0 = 1.0


def test_tube_shape_operator(tube, grid):
    geom = fundamental_forms(tube.chart(grid))
    k = principal_curvatures(geom)
    assert np.allclose(k[..., 0], -1 / np.tanh(U0), atol=1e-12)
    assert np.allclose(k[..., 1], -np.tanh(U0), atol=1e-12)
    assert np.allclose(k[0, 0], [-1.31304, -0.76159], atol=1e-5)
    assert np.max(np.abs(geom.gauss)) < 1e-10
    assert geom.gauss_residual() < 1e-10
    assert geom.self_adjoint_residual() < 1e-12


def test_vertical_plane_is_totally_geodesic(strip, strip_collar):
    geom = fundamental_forms(strip.chart(strip_collar.grid))
    assert np.max(np.abs(geom.shape)) < 1e-12
    assert np.allclose(geom.gauss, -1.0, atol=1e-9)


def test_convexity_examples(tube, grid):
    geom = fundamental_forms(tube.chart(grid))
    assert check_convexity(geom)[0]
    flat = geometry_from_forms(geom.first, np.zeros_like(geom.shape), grid)
    assert check_convexity(flat)[0]
    reversed_ = fundamental_forms(SurfaceChart(tube.jet, grid, orientation=-1))
    ok, top = check_convexity(reversed_)
    assert not ok and top == pytest.approx(1 / np.tanh(U0))
    with pytest.raises(NonConvexError):
        check_convexity(reversed_, strict=True)


def test_area_and_mean_curvature_integrals(tube, grid):
    geom = fundamental_forms(tube.chart(grid))
    area = 2 * np.pi * 2.0 * np.cosh(U0) * np.sinh(U0)
    assert integrate_surface(np.ones(grid.n1 * grid.n2).reshape(16, 16), geom) == pytest.approx(area, rel=1e-12)
    assert area == pytest.approx(22.7882, abs=1e-4)
    assert integrate_surface(np.zeros((16, 16)), geom) == 0.0
    total = integrate_surface(geom.mean, geom)
    assert total == pytest.approx(-(np.tanh(U0) + 1 / np.tanh(U0)) * area, rel=1e-12)
    assert total == pytest.approx(-4 * np.pi * np.cosh(2 * U0), rel=1e-12)


def test_integrate_rejects_grid_mismatch(tube, grid):
    geom = fundamental_forms(tube.chart(grid))
    with pytest.raises(DomainError):
        integrate_surface(np.ones((8, 8)), geom)


def test_quadrature_converges_spectrally():
    bumped = Tube(1.0, 2.0, 0.3, 0.08, (1, 1))
    area = [integrate_surface(1.0, fundamental_forms(bumped.chart(ChartGrid(n, n)))) for n in (24, 48)]
    assert abs(area[0] - area[1]) < 1e-8


def test_bumped_tube_gauss_equation(bumped, bumped_collar):
    geom = bumped_collar.base_geometry()
    assert geom.gauss_residual() < 1e-6
    assert np.max(np.abs(geom.gauss)) > 1e-2
    assert check_convexity(geom)[0]


def test_monge_patch_matches_graph_formula():
    """Downward-oriented graph ``t = 1 + |x|^2 / 4`` at its critical point."""
    graph = paraboloid(0.25, 1.0)
    first, shape, normal = leaf_forms(*graph_jet(graph)(np.array(0.0), np.array(0.0)), orientation=-1)
    assert np.allclose(first, np.eye(2))
    assert np.allclose(normal, [0.0, 0.0, -1.0])
    assert np.allclose(shape, -np.eye(2) - 0.5 * np.eye(2))


def test_fd_jet_matches_analytic_jet(bumped):
    a, b = np.meshgrid(np.linspace(0, 1, 5), np.linspace(0, 1, 4), indexing="ij")
    exact = bumped.jet(a, b)
    approx = fd_jet(lambda c1, c2: bumped.jet(c1, c2)[0])(a, b)
    assert np.allclose(exact[1], approx[1], atol=1e-9)
    assert np.allclose(exact[2], approx[2], atol=1e-5)
