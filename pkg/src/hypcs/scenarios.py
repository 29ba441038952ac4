"""Concrete surfaces: tubes about a closed geodesic and local graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .foliation import GraphFunction, HyperbolicCollar, graph_jet
from .hypgeom import FermiChart, fermi_jet
from .spectral import ChartGrid
from .surfaces import SurfaceChart


@dataclass(frozen=True)
class Tube:
    """Boundary of a tube about the closed geodesic of length ``length``.

    Chart coordinates ``(a, b)`` in the unit square give ``s = length * a``,
    ``theta = 2 pi b + twist * a`` and Fermi radius
    ``radius + bump * cos(2 pi (m1 a + m2 b))``.
    """

    radius: float
    length: float
    twist: float = 0.0
    bump: float = 0.0
    modes: tuple[int, int] = (0, 1)

    def __post_init__(self):
        if not (self.radius > 0 and self.length > 0):
            raise ConfigError("tube radius and length must be positive")
        if abs(self.bump) >= self.radius:
            raise ConfigError("bump must be smaller than the radius")

    @property
    def fermi(self) -> FermiChart:
        return FermiChart(self.length, self.twist)

    def fermi_coords(self, a, b, r=0.0):
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        phase = 2 * np.pi * (self.modes[0] * a + self.modes[1] * b)
        u = self.radius + self.bump * np.cos(phase) + r
        return u, self.length * a, 2 * np.pi * b + self.twist * a

    def jet(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        u, s, theta = self.fermi_coords(a, b)
        x, f1, f2 = fermi_jet(u, s, theta)
        phase = 2 * np.pi * (self.modes[0] * a + self.modes[1] * b)
        k = 2 * np.pi * np.asarray(self.modes, dtype=float)
        wc = np.zeros(a.shape + (2, 3))
        wc[..., :, 0] = -self.bump * np.sin(phase)[..., None] * k
        wc[..., 0, 1] = self.length
        wc[..., 0, 2] = self.twist
        wc[..., 1, 2] = 2 * np.pi
        wcc = np.zeros(a.shape + (2, 2, 3))
        wcc[..., 0] = -self.bump * np.cos(phase)[..., None, None] * np.outer(k, k)
        dx = np.einsum("...ck,...ka->...ca", wc, f1)
        d2x = np.einsum("...kla,...ck,...dl->...cda", f2, wc, wc) + np.einsum(
            "...cdk,...ka->...cda", wcc, f1
        )
        return x, dx, d2x

    def chart(self, grid: ChartGrid) -> SurfaceChart:
        return SurfaceChart(self.jet, grid, orientation=1)

    def collar(self, grid: ChartGrid) -> HyperbolicCollar:
        return HyperbolicCollar(self.chart(grid))

    def core_volume(self, grid: ChartGrid) -> float:
        """Volume of the solid tube bounded by the leaf."""
        a, b = grid.nodes()
        u, _, _ = self.fermi_coords(a, b)
        return float(2 * np.pi * self.length * grid.integrate(np.sinh(u) ** 2 / 2))

    @property
    def euler_characteristic(self) -> int:
        return 0


@dataclass(frozen=True)
class FuchsianStrip:
    """Totally geodesic strip of width ``2 half_width`` about a closed geodesic.

    Chart coordinates ``(a, b)`` give ``s = length * a`` along the geodesic and
    signed distance ``half_width * (2b - 1)`` inside the vertical plane.
    """

    length: float
    half_width: float = 1.0

    def jet(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        x, f1, f2 = fermi_jet(self.half_width * (2 * b - 1), self.length * a, np.zeros_like(a))
        scale = np.array([[0.0, self.length, 0.0], [2 * self.half_width, 0.0, 0.0]])
        dx = np.einsum("ck,...ka->...ca", scale, f1)
        d2x = np.einsum("...kla,ck,dl->...cda", f2, scale, scale)
        return x, dx, d2x

    def grid(self, n1: int, n2: int) -> ChartGrid:
        return ChartGrid(n1, n2, periodic=(True, False))

    def chart(self, grid: ChartGrid) -> SurfaceChart:
        return SurfaceChart(self.jet, grid, orientation=1)

    def collar(self, grid: ChartGrid) -> HyperbolicCollar:
        return HyperbolicCollar(self.chart(grid))


@dataclass(frozen=True)
class GraphPatch:
    """Graph ``t = f(x)`` over the square ``|x_i| <= extent``, normal pointing down."""

    graph: GraphFunction
    extent: float = 0.5

    def grid(self, n1: int, n2: int | None = None) -> ChartGrid:
        e = self.extent
        return ChartGrid(n1, n2 or n1, periodic=(False, False), span=(2 * e, 2 * e), origin=(-e, -e))

    def chart(self, grid: ChartGrid) -> SurfaceChart:
        return SurfaceChart(graph_jet(self.graph), grid, orientation=-1)

    def collar(self, grid: ChartGrid) -> HyperbolicCollar:
        return HyperbolicCollar(self.chart(grid))


def horosphere(height: float = 1.0):
    """Graph of the horizontal horosphere ``t = height``."""
    return paraboloid(0.0, height)


def paraboloid(scale: float = 0.25, height: float = 1.0):
    """Graph ``t = height + scale |x|^2`` with its gradient and Hessian."""

    def graph(x1, x2):
        x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
        f = height + scale * (x1**2 + x2**2)
        grad = np.stack([2 * scale * x1, 2 * scale * x2], -1)
        hess = np.broadcast_to(2 * scale * np.eye(2), x1.shape + (2, 2)).copy()
        return f, grad, hess

    return graph


def hemisphere(radius: float = 1.0):
    """Graph of the totally geodesic hemisphere ``t = sqrt(R^2 - |x|^2)``."""

    def graph(x1, x2):
        x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
        f = np.sqrt(radius**2 - x1**2 - x2**2)
        x = np.stack([x1, x2], -1)
        grad = -x / f[..., None]
        hess = -np.eye(2) / f[..., None, None] - np.einsum("...i,...j->...ij", x, x) / f[
            ..., None, None
        ] ** 3
        return f, grad, hess

    return graph
