"""Embedded surface charts and their fundamental forms.

The shape operator follows the convention ``B(X) = -grad_X N`` with ``N`` the
chosen unit normal, so the second fundamental form is ``II(X, Y) = <N, grad_X Y>
= I(BX, Y)``.  With the outward normal a convex surface has ``B <= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NonConvexError
from .hypgeom import christoffel
from .spectral import ChartGrid

Jet = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class SurfaceChart:
    """A chart ``c -> X(c)`` into upper half-space sampled on ``grid``.

    ``jet(c1, c2)`` returns the point, its two coordinate tangents
    ``(..., 2, 3)`` and second derivatives ``(..., 2, 2, 3)``.
    ``orientation`` flips the unit normal.
    """

    jet: Jet
    grid: ChartGrid
    orientation: int = 1

    def nodes(self):
        return self.grid.nodes()


def fd_jet(embed: Callable, h: float = 1e-3) -> Jet:
    """Fourth order finite-difference jet of an embedding ``embed(c1, c2)``."""
    stencil = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
    second = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))

    def shift(c1, c2, k, m):
        return (c1 + m * h, c2) if k == 0 else (c1, c2 + m * h)

    def jet(c1, c2):
        c1, c2 = np.broadcast_arrays(np.asarray(c1, float), np.asarray(c2, float))
        x = embed(c1, c2)
        d1 = [sum(w * embed(*shift(c1, c2, k, m)) for m, w in stencil) / h for k in (0, 1)]
        d11 = [sum(w * embed(*shift(c1, c2, k, m)) for m, w in second) / h**2 for k in (0, 1)]
        d12 = sum(
            w1 * w2 * embed(c1 + m1 * h, c2 + m2 * h)
            for m1, w1 in stencil
            for m2, w2 in stencil
        ) / h**2
        dx = np.stack(d1, axis=-2)
        d2x = np.stack([np.stack([d11[0], d12], -2), np.stack([d12, d11[1]], -2)], -3)
        return x, dx, d2x

    return jet


def leaf_forms(x, dx, d2x, orientation: int = 1):
    """First fundamental form, shape operator and unit normal at chart points.

    ``B`` is the mixed tensor ``B[..., i, j]`` with ``B d_j = sum_i B[i, j] d_i``.
    """
    t = x[..., 2]
    first = np.einsum("...ia,...ja->...ij", dx, dx) / t[..., None, None] ** 2
    cross = np.cross(dx[..., 0, :], dx[..., 1, :])
    normal = orientation * t[..., None] * cross / np.linalg.norm(cross, axis=-1, keepdims=True)
    gam = christoffel(x)
    acc = d2x + np.einsum("...kab,...ia,...jb->...ijk", gam, dx, dx)
    second = np.einsum("...k,...ijk->...ij", normal, acc) / t[..., None, None] ** 2
    shape = np.linalg.solve(first, second)
    return first, shape, normal


def brioschi(first: np.ndarray, grid: ChartGrid) -> np.ndarray:
    """Gauss curvature of a metric sampled on ``grid`` from the Brioschi formula."""
    e, f, g = first[..., 0, 0], first[..., 0, 1], first[..., 1, 1]
    du = lambda a: grid.deriv(a, 0)
    dv = lambda a: grid.deriv(a, 1)
    eu, ev, fu, fv, gu, gv = du(e), dv(e), du(f), dv(f), du(g), dv(g)
    top = -0.5 * dv(ev) + dv(fu) - 0.5 * du(gu)
    m1 = np.stack(
        [
            np.stack([top, 0.5 * eu, fu - 0.5 * ev], -1),
            np.stack([fv - 0.5 * gu, e, f], -1),
            np.stack([0.5 * gv, f, g], -1),
        ],
        -2,
    )
    zero = np.zeros_like(e)
    m2 = np.stack(
        [
            np.stack([zero, 0.5 * ev, 0.5 * gu], -1),
            np.stack([0.5 * ev, e, f], -1),
            np.stack([0.5 * gu, f, g], -1),
        ],
        -2,
    )
    return (np.linalg.det(m1) - np.linalg.det(m2)) / (e * g - f * f) ** 2


@dataclass
class LeafGeometry:
    """Intrinsic and extrinsic data of a leaf sampled on a grid."""

    grid: ChartGrid
    first: np.ndarray
    shape: np.ndarray
    gauss: np.ndarray
    area_density: np.ndarray

    @property
    def mean(self) -> np.ndarray:
        return np.trace(self.shape, axis1=-2, axis2=-1)

    @property
    def extrinsic(self) -> np.ndarray:
        return np.linalg.det(self.shape)

    def gauss_residual(self) -> float:
        """Maximum of ``|K_int - (det B - 1)|``."""
        return float(np.max(np.abs(self.gauss - (self.extrinsic - 1.0))))

    def self_adjoint_residual(self) -> float:
        lowered = self.first @ self.shape
        return float(np.max(np.abs(lowered - np.swapaxes(lowered, -1, -2))))


def geometry_from_forms(first: np.ndarray, shape: np.ndarray, grid: ChartGrid) -> LeafGeometry:
    return LeafGeometry(
        grid=grid,
        first=first,
        shape=shape,
        gauss=brioschi(first, grid),
        area_density=np.sqrt(np.linalg.det(first)),
    )


def fundamental_forms(chart: SurfaceChart) -> LeafGeometry:
    """Fundamental forms of ``chart`` at its grid nodes."""
    c1, c2 = chart.nodes()
    first, shape, _ = leaf_forms(*chart.jet(c1, c2), chart.orientation)
    return geometry_from_forms(first, shape, chart.grid)


def principal_curvatures(geom: LeafGeometry) -> np.ndarray:
    """Eigenvalues of the shape operator, ascending."""
    chol = np.linalg.cholesky(geom.first)
    inv = np.linalg.inv(chol)
    sym = inv @ (geom.first @ geom.shape) @ np.swapaxes(inv, -1, -2)
    return np.linalg.eigvalsh((sym + np.swapaxes(sym, -1, -2)) / 2)


def check_convexity(geom: LeafGeometry, tol: float = 1e-10, strict: bool = False):
    """Whether ``B <= tol`` everywhere, with the largest principal curvature.

    With ``strict`` a failing leaf raises :class:`NonConvexError`.
    """
    top = float(np.max(principal_curvatures(geom)))
    if strict and top > tol:
        raise NonConvexError(f"shape operator has eigenvalue {top:.3e} > 0")
    return top <= tol, top


def integrate_surface(density: np.ndarray, geom: LeafGeometry) -> float:
    """Integral of a scalar density against the area form of ``geom``."""
    density = np.asarray(density, dtype=float)
    if density.ndim and density.shape != geom.area_density.shape:
        raise DomainError(f"density shape {density.shape} does not match the grid {geom.area_density.shape}")
    return float(geom.grid.integrate(density * geom.area_density))
