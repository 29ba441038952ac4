"""Equidistant foliations, the metric at infinity and collar models.

A collar is described in chart coordinates ``(c1, c2, r)`` where ``c`` are the
coordinates of the base leaf and ``r`` the signed distance along the normal
flow.  The hyperbolic collar has metric ``dr^2 + I_r`` with ``I_r`` obtained by
propagating the base forms; the warped model has ``dr^2 + exp(2r) I_inf``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, FocalRadiusError
from .hypgeom import normal_flow
from .spectral import ChartGrid
from .surfaces import LeafGeometry, SurfaceChart, geometry_from_forms, leaf_forms, principal_curvatures

EYE2 = np.eye(2)


def propagate_forms(first: np.ndarray, shape: np.ndarray, r):
    """Forms of the leaf at distance ``r``, pulled back to the base chart.

    Returns ``(I_r, B_r, A_r)`` with ``A_r = cosh r - sinh r B``.
    """
    r = np.asarray(r, dtype=float)[..., None, None]
    a = np.cosh(r) * EYE2 - np.sinh(r) * shape
    if np.any(np.linalg.det(a) <= 0):
        raise FocalRadiusError("propagation radius reaches a focal point")
    first_r = np.swapaxes(a, -1, -2) @ first @ a
    shape_r = -np.linalg.solve(a, np.sinh(r) * EYE2 - np.cosh(r) * shape)
    return first_r, shape_r, a


def propagate(geom: LeafGeometry, r: float) -> LeafGeometry:
    """Leaf geometry at distance ``r`` along the outward normal flow."""
    first, shape, _ = propagate_forms(geom.first, geom.shape, r)
    return geometry_from_forms(first, shape, geom.grid)


def focal_radius(geom: LeafGeometry) -> float:
    """Largest inward distance before the normal flow focuses."""
    low = float(np.min(principal_curvatures(geom)))
    return float(np.arctanh(-1.0 / low)) if low < -1.0 else np.inf


@dataclass
class InfinityGeometry:
    """Metric at infinity in the base chart and the map ``V = (1 - B) / sqrt 2``."""

    grid: ChartGrid
    first: np.ndarray
    area_density: np.ndarray
    scale_map: np.ndarray


def infinity_forms(first: np.ndarray, shape: np.ndarray):
    v = (EYE2 - shape) / np.sqrt(2.0)
    return np.swapaxes(v, -1, -2) @ first @ v, v


def metric_at_infinity(geom: LeafGeometry) -> InfinityGeometry:
    first, v = infinity_forms(geom.first, geom.shape)
    return InfinityGeometry(geom.grid, first, np.sqrt(np.linalg.det(first)), v)


def conformal_check(geom: LeafGeometry, r: float) -> float:
    """Relative residual of ``I_inf(S_r) = exp(2r) I_inf(S)`` in the base chart."""
    base = metric_at_infinity(geom).first
    moved = metric_at_infinity(propagate(geom, r)).first
    expected = np.exp(2 * r) * base
    return float(np.max(np.abs(moved - expected)) / np.max(np.abs(expected)))


@dataclass(frozen=True)
class CollarSpec:
    """Radial extent of a collar: inner margin and increasing sample radii."""

    eps: float
    radii: tuple[float, ...]
    nodes: int = 4

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size < 2 or np.any(np.diff(r) <= 0) or r[0] < 0:
            raise ConfigError("sample radii must be nonnegative and increasing")
        if not self.eps > 0 or self.nodes < 1:
            raise ConfigError("collar margin and node count must be positive")

    def validate(self, geom: LeafGeometry) -> None:
        if self.eps >= focal_radius(geom):
            raise FocalRadiusError("inner collar margin exceeds the focal radius")


# graphs over the boundary plane


GraphFunction = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


def graph_jet(graph: GraphFunction):
    """Chart jet of the surface ``t = f(x)`` given ``graph -> (f, grad, hess)``."""

    def jet(c1, c2):
        f, grad, hess = graph(c1, c2)
        one, zero = np.ones_like(f), np.zeros_like(f)
        x = np.stack([c1 + zero, c2 + zero, f], -1)
        dx = np.stack(
            [np.stack([one, zero, grad[..., 0]], -1), np.stack([zero, one, grad[..., 1]], -1)], -2
        )
        d2x = np.zeros(f.shape + (2, 2, 3))
        d2x[..., 2] = hess
        return x, dx, d2x

    return jet


def normal_hit(graph: GraphFunction, c1, c2):
    """Boundary point reached by the downward normal geodesic of ``t = f(x)``.

    Returns the image ``(..., 2)`` and its differential ``(..., 2, 2)``.
    """
    f, grad, hess = graph(np.asarray(c1, float), np.asarray(c2, float))
    s = np.sqrt(1.0 + np.sum(grad * grad, axis=-1))
    phi = f / (1.0 + s)
    image = np.stack([c1, c2], -1) + phi[..., None] * grad
    ds = np.einsum("...ij,...j->...i", hess, grad) / s[..., None]
    dphi = grad / (1.0 + s)[..., None] - (f / (1.0 + s) ** 2)[..., None] * ds
    diff = EYE2 + np.einsum("...i,...j->...ij", grad, dphi) + phi[..., None, None] * hess
    return image, diff


@dataclass
class NormalHitTable:
    """Normal-hit map of a graph and the metric at infinity pushed to the boundary.

    ``pulled`` is ``w* I_inf`` in boundary coordinates, ``factor`` its conformal
    factor against the flat metric and ``anisotropy`` the relative distance to
    that multiple of the identity.  The critical-point residuals compare
    ``w* I_inf`` with ``2 Id`` and the differential with ``Id + Hess f / 2``.
    """

    points: np.ndarray
    image: np.ndarray
    differential: np.ndarray
    pulled: np.ndarray
    factor: np.ndarray
    anisotropy: np.ndarray
    critical_metric_residual: float
    critical_differential_residual: float

    def max_residual(self) -> float:
        return float(max(np.max(self.anisotropy), self.critical_metric_residual,
                         self.critical_differential_residual))


def normal_hit_table(graph: GraphFunction, c1, c2, critical=(0.0, 0.0)) -> NormalHitTable:
    """Identity table of the normal-hit map at chart points ``(c1, c2)``.

    ``critical`` is a critical point of ``f`` with ``f = 1`` there.
    """
    c1, c2 = np.broadcast_arrays(np.asarray(c1, float), np.asarray(c2, float))
    image, diff = normal_hit(graph, c1, c2)
    first, shape, _ = leaf_forms(*graph_jet(graph)(c1, c2), orientation=-1)
    inf, _ = infinity_forms(first, shape)
    dw = np.linalg.inv(diff)
    pulled = np.swapaxes(dw, -1, -2) @ inf @ dw
    factor = np.trace(pulled, axis1=-2, axis2=-1) / 2
    aniso = np.max(np.abs(pulled - factor[..., None, None] * EYE2), axis=(-2, -1)) / factor

    p1, p2 = (np.array(float(v)) for v in critical)
    f0, grad0, hess0 = graph(p1, p2)
    if abs(float(f0) - 1.0) > 1e-12 or np.max(np.abs(grad0)) > 1e-12:
        raise DomainError("critical point must satisfy f = 1 and grad f = 0")
    _, diff0 = normal_hit(graph, p1, p2)
    first0, shape0, _ = leaf_forms(*graph_jet(graph)(p1, p2), orientation=-1)
    dw0 = np.linalg.inv(diff0)
    pulled0 = dw0.T @ infinity_forms(first0, shape0)[0] @ dw0
    return NormalHitTable(
        points=np.stack([c1, c2], -1),
        image=image,
        differential=diff,
        pulled=pulled,
        factor=factor,
        anisotropy=aniso,
        critical_metric_residual=float(np.max(np.abs(pulled0 - 2 * EYE2))),
        critical_differential_residual=float(np.max(np.abs(diff0 - (EYE2 + hess0 / 2)))),
    )


# collar models


def _block(first: np.ndarray) -> np.ndarray:
    out = np.zeros(first.shape[:-2] + (3, 3))
    out[..., :2, :2] = first
    out[..., 2, 2] = 1.0
    return out


@dataclass
class HyperbolicCollar:
    """Normal-flow collar of a convex leaf ``chart`` in hyperbolic space."""

    chart: SurfaceChart
    jacobian_step: float = 1e-3
    _base: LeafGeometry | None = field(default=None, repr=False)

    @property
    def grid(self) -> ChartGrid:
        return self.chart.grid

    def base_point_forms(self, c1, c2):
        x, dx, d2x = self.chart.jet(c1, c2)
        first, shape, normal = leaf_forms(x, dx, d2x, self.chart.orientation)
        return x, first, shape, normal

    def base_geometry(self) -> LeafGeometry:
        if self._base is None:
            c1, c2 = self.grid.nodes()
            _, first, shape, _ = self.base_point_forms(c1, c2)
            self._base = geometry_from_forms(first, shape, self.grid)
        return self._base

    def leaf(self, c1, c2, r):
        """``(I_r, B_r)`` at chart points of the leaf at distance ``r``."""
        _, first, shape, _ = self.base_point_forms(c1, c2)
        first_r, shape_r, _ = propagate_forms(first, shape, r)
        return first_r, shape_r

    def metric(self, c1, c2, r) -> np.ndarray:
        return _block(self.leaf(c1, c2, r)[0])

    def embed(self, c1, c2, r) -> np.ndarray:
        x, _, _, normal = self.base_point_forms(c1, c2)
        return normal_flow(x, normal, r)[0]

    def frame_data(self, c1, c2, r):
        """Collar point and the rows ``dX/dc1, dX/dc2, dX/dr`` at distance ``r``.

        Normal Jacobi fields satisfy ``J'' = J``, so ``dX/dc`` is the parallel
        transport of ``A_r dX0/dc``.
        """
        x, dx, d2x = self.chart.jet(c1, c2)
        first, shape, normal = leaf_forms(x, dx, d2x, self.chart.orientation)
        _, _, a = propagate_forms(first, shape, r)
        point, transport = normal_flow(x, normal, r)
        moved = np.einsum("...kl,...ka->...la", a, dx)
        rows = np.concatenate([moved, normal[..., None, :]], axis=-2)
        return point, np.einsum("...ab,...lb->...la", transport, rows)

    def jacobian(self, c1, c2, r) -> np.ndarray:
        return self.frame_data(c1, c2, r)[1]

    def jacobian_fd(self, c1, c2, r) -> np.ndarray:
        """Finite-difference version of :meth:`jacobian`."""
        c1, c2 = np.broadcast_arrays(np.asarray(c1, float), np.asarray(c2, float))
        h = self.jacobian_step
        weights = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
        d1 = sum(w * self.embed(c1 + m * h, c2, r) for m, w in weights) / h
        d2 = sum(w * self.embed(c1, c2 + m * h, r) for m, w in weights) / h
        dr = sum(w * self.embed(c1, c2, r + m * h) for m, w in weights) / h
        return np.stack([d1, d2, dr], -2)

    def leaf_geometry(self, r: float) -> LeafGeometry:
        return propagate(self.base_geometry(), r)


@dataclass
class WarpedCollar:
    """The model ``dr^2 + exp(2r) I_inf`` built from a hyperbolic collar."""

    source: HyperbolicCollar

    @property
    def grid(self) -> ChartGrid:
        return self.source.grid

    def infinity(self, c1, c2):
        _, first, shape, _ = self.source.base_point_forms(c1, c2)
        return infinity_forms(first, shape)

    def leaf(self, c1, c2, r):
        first, _ = self.infinity(c1, c2)
        r = np.asarray(r, dtype=float)[..., None, None]
        return np.exp(2 * r) * first, -np.broadcast_to(EYE2, first.shape).copy()

    def metric(self, c1, c2, r) -> np.ndarray:
        return _block(self.leaf(c1, c2, r)[0])
