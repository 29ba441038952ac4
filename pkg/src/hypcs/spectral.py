"""Periodic grids, spectral differentiation and quadrature helpers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def chebyshev_matrix(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev-Lobatto nodes on [-1, 1] (descending) and differentiation matrix."""
    if n < 2:
        raise ValueError("need at least two Chebyshev nodes")
    m = n - 1
    x = np.cos(np.pi * np.arange(n) / m)
    c = np.ones(n)
    c[[0, -1]] = 2.0
    c *= (-1.0) ** np.arange(n)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n))
    d -= np.diag(d.sum(axis=1))
    return x, d


def clenshaw_curtis(n: int) -> np.ndarray:
    """Clenshaw-Curtis weights on [-1, 1] for the nodes of :func:`chebyshev_matrix`."""
    m = n - 1
    theta = np.pi * np.arange(n) / m
    w = np.zeros(n)
    v = np.ones(n - 2)
    inner = slice(1, n - 1)
    if m % 2 == 0:
        w[0] = w[-1] = 1.0 / (m * m - 1)
        for k in range(1, m // 2):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
        v -= np.cos(m * theta[inner]) / (m * m - 1)
    else:
        w[0] = w[-1] = 1.0 / (m * m)
        for k in range(1, (m - 1) // 2 + 1):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
    w[inner] = 2 * v / m
    return w


@dataclass(frozen=True)
class ChartGrid:
    """Grid on a rectangle of chart coordinates.

    Periodic axes are uniform with Fourier differentiation; other axes use
    Chebyshev-Lobatto nodes with Chebyshev differentiation and
    Clenshaw-Curtis weights.  Arrays sampled on the grid carry the two grid
    axes first.
    """

    n1: int
    n2: int
    periodic: tuple[bool, bool] = (True, True)
    span: tuple[float, float] = (1.0, 1.0)
    origin: tuple[float, float] = (0.0, 0.0)

    def _size(self, k: int) -> int:
        return (self.n1, self.n2)[k]

    def axis(self, k: int) -> np.ndarray:
        n = self._size(k)
        if self.periodic[k]:
            return self.origin[k] + self.span[k] * np.arange(n) / n
        x, _ = chebyshev_matrix(n)
        return self.origin[k] + self.span[k] * (1 - x) / 2

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis(0), self.axis(1), indexing="ij")

    def deriv(self, f: np.ndarray, axis: int) -> np.ndarray:
        """Derivative of grid samples along a chart axis."""
        f = np.asarray(f)
        if not self.periodic[axis]:
            _, d = chebyshev_matrix(self._size(axis))
            d = -2.0 / self.span[axis] * d
            return np.moveaxis(np.tensordot(d, np.moveaxis(f, axis, 0), axes=(1, 0)), 0, axis)
        n = f.shape[axis]
        k = np.fft.fftfreq(n, d=1.0 / n) * (2.0 * np.pi / self.span[axis])
        if n % 2 == 0:
            k[n // 2] = 0.0
        shape = [1] * f.ndim
        shape[axis] = n
        out = np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(f, axis=axis), axis=axis)
        return out if np.iscomplexobj(f) else out.real

    def integrate(self, f: np.ndarray) -> np.ndarray:
        """Integral over the chart domain of samples with respect to dc1 dc2."""
        w = [self._weights(k) for k in (0, 1)]
        return np.einsum("i,j,ij...->...", w[0], w[1], np.asarray(f))

    def _weights(self, k: int) -> np.ndarray:
        n = self._size(k)
        if self.periodic[k]:
            return np.full(n, self.span[k] / n)
        return clenshaw_curtis(n) * self.span[k] / 2


def gauss_legendre_panels(radii: np.ndarray, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on consecutive intervals of ``radii``.

    Returns node positions and weights with shape (len(radii) - 1, nodes).
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    a, b = np.asarray(radii[:-1]), np.asarray(radii[1:])
    mid, half = (a + b) / 2, (b - a) / 2
    return mid[:, None] + half[:, None] * x, half[:, None] * w


def central_difference(fn, x: float, h: float):
    """Second order central difference of a callable at ``x``."""
    return (fn(x + h) - fn(x - h)) / (2.0 * h)
