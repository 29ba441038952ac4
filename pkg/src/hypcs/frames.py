"""Orthonormal frame fields on collars, constant frames and gauges.

A frame field is evaluated as an array ``E[..., i, mu]``: the ``mu``-th chart
component of the ``i``-th vector, with chart coordinates ordered
``(c1, c2, r)``.  Gauges act on the right, ``(s g)_j = sum_i s_i g_ij``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonConstantFrameError
from .foliation import EYE2, HyperbolicCollar, WarpedCollar, propagate_forms

FrameFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass
class FrameField:
    """An orthonormal frame field ``fn(c1, c2, r)`` on ``collar``."""

    collar: HyperbolicCollar | WarpedCollar
    fn: FrameFn
    label: str = "frame"

    def __call__(self, c1, c2, r) -> np.ndarray:
        return self.fn(c1, c2, r)

    @property
    def grid(self):
        return self.collar.grid

    def on_grid(self, r: float) -> np.ndarray:
        c1, c2 = self.grid.nodes()
        return self.fn(c1, c2, r)

    def orthonormality_residual(self, r: float) -> float:
        c1, c2 = self.grid.nodes()
        e = self.fn(c1, c2, r)
        gram = e @ self.collar.metric(c1, c2, r) @ np.swapaxes(e, -1, -2)
        return float(np.max(np.abs(gram - np.eye(3))))

    def normal_components(self, r: float) -> np.ndarray:
        return self.on_grid(r)[..., 2]

    def is_adapted(self, r: float = 0.0, tol: float = 1e-10) -> bool:
        e = self.on_grid(r)
        return bool(np.max(np.abs(e[..., 2, :] - np.array([0.0, 0.0, 1.0]))) < tol)


def rotation(axis: int, angle) -> np.ndarray:
    """Rotation matrices by ``angle`` about a coordinate axis."""
    angle = np.asarray(angle, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    i, j = [k for k in range(3) if k != axis]
    out = np.zeros(angle.shape + (3, 3))
    out[..., axis, axis] = 1.0
    out[..., i, i] = c
    out[..., j, j] = c
    out[..., j, i] = s
    out[..., i, j] = -s
    return out


def apply_gauge(frame: np.ndarray, gauge: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...im->...jm", gauge, frame)


def gram_schmidt_frame(first: np.ndarray) -> np.ndarray:
    """Adapted frame ``(d1 / |d1|, ., d_r)`` from a leaf metric."""
    e11, e12 = first[..., 0, 0], first[..., 0, 1]
    det = np.linalg.det(first)
    out = np.zeros(first.shape[:-2] + (3, 3))
    out[..., 0, 0] = 1 / np.sqrt(e11)
    out[..., 1, 0] = -e12 / np.sqrt(e11 * det)
    out[..., 1, 1] = np.sqrt(e11 / det)
    out[..., 2, 2] = 1.0
    return out


def build_constant_frame(base: Callable, collar: HyperbolicCollar, label: str = "constant") -> FrameField:
    """Extend a frame on the base leaf so that it is constant along the flow.

    ``base(c1, c2)`` gives the frame at ``r = 0``.  On the leaf at distance
    ``r`` tangential parts are mapped by ``A_r^-1`` and normal parts kept.
    """

    def fn(c1, c2, r):
        e = np.array(base(c1, c2), dtype=float)
        _, first, shape, _ = collar.base_point_forms(c1, c2)
        _, _, a = propagate_forms(first, shape, r)
        e[..., :2] = np.einsum("...ab,...ib->...ia", np.linalg.inv(a), e[..., :2])
        return e

    return FrameField(collar, fn, label)


def adapted_frame(collar: HyperbolicCollar) -> FrameField:
    """Constant extension of the Gram-Schmidt adapted frame of the base leaf."""

    def base(c1, c2):
        return gram_schmidt_frame(collar.base_point_forms(c1, c2)[1])

    return build_constant_frame(base, collar, "adapted")


def fermi_frame(collar: HyperbolicCollar, tube) -> FrameField:
    """Closed-form Fermi frame ``(d_s / cosh u, d_theta / sinh u, d_u)`` of a round tube."""
    if tube.bump != 0:
        raise ValueError("the Fermi frame is adapted only to round tubes")
    length, twist = tube.length, tube.twist

    def fn(c1, c2, r):
        c1, c2 = np.broadcast_arrays(np.asarray(c1, float), np.asarray(c2, float))
        u = tube.radius + np.asarray(r, dtype=float) + np.zeros_like(c1)
        out = np.zeros(c1.shape + (3, 3))
        out[..., 0, 0] = 1 / (length * np.cosh(u))
        out[..., 0, 1] = -twist / (2 * np.pi * length * np.cosh(u))
        out[..., 1, 1] = 1 / (2 * np.pi * np.sinh(u))
        out[..., 2, 2] = 1.0
        return out

    return FrameField(collar, fn, "fermi")


def twist_angle(c1, c2, n1: int, n2: int):
    return 2 * np.pi * (n1 * np.asarray(c1) + n2 * np.asarray(c2))


def regauged(field: FrameField, gauge: Callable, label: str) -> FrameField:
    """The frame ``s g`` for a gauge ``gauge(c1, c2, r) -> SO(3)``."""

    def fn(c1, c2, r):
        return apply_gauge(field(c1, c2, r), gauge(c1, c2, r))

    return FrameField(field.collar, fn, label)


def twist_gauge(n1: int, n2: int):
    def gauge(c1, c2, r):
        return rotation(2, twist_angle(c1, c2, n1, n2))

    return gauge


def tilt_gauge(beta: float, n1: int, n2: int):
    """Rotation by ``beta`` about the first vector, then a twist about the new third one."""

    def gauge(c1, c2, r):
        return rotation(0, beta) @ rotation(2, twist_angle(c1, c2, n1, n2))

    return gauge


def twisted(field: FrameField, n1: int = 1, n2: int = 0) -> FrameField:
    return regauged(field, twist_gauge(n1, n2), f"twisted({n1},{n2})")


def tilted(field: FrameField, beta: float, n1: int = 0, n2: int = 1) -> FrameField:
    return regauged(field, tilt_gauge(beta, n1, n2), f"tilted({beta:g},{n1},{n2})")


def gauge_between(first: np.ndarray, second: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """Gauge ``g`` with ``second = first g`` for orthonormal frames."""
    return np.einsum("...im,...mn,...jn->...ij", first, metric, second)


def pull_back_to_base(field: FrameField, r: float) -> np.ndarray:
    """The frame ``A_r u_r* s`` on the base leaf."""
    c1, c2 = field.grid.nodes()
    e = np.array(field(c1, c2, r))
    _, first, shape, _ = field.collar.base_point_forms(c1, c2)
    _, _, a = propagate_forms(first, shape, r)
    e[..., :2] = np.einsum("...ab,...ib->...ia", a, e[..., :2])
    return e


def verify_constant(field: FrameField, radii, tol: float | None = None) -> float:
    """Largest Frobenius distance of the gauge ``g_r`` from its value at the base leaf."""
    c1, c2 = field.grid.nodes()
    base = field(c1, c2, 0.0)
    metric = field.collar.metric(c1, c2, 0.0)
    worst = 0.0
    for r in radii:
        g = gauge_between(base, pull_back_to_base(field, r), metric)
        worst = max(worst, float(np.max(np.linalg.norm(g - np.eye(3), axis=(-2, -1)))))
    if tol is not None and worst > tol:
        raise NonConstantFrameError(f"frame drifts by {worst:.3e} along the flow")
    return worst


def frame_at_infinity(field: FrameField, warped: WarpedCollar | None = None) -> FrameField:
    """The frame ``(V v*)^-1 s`` on the warped model."""
    warped = warped or WarpedCollar(field.collar)

    def fn(c1, c2, r):
        e = np.array(field(c1, c2, r), dtype=float)
        _, shape_r = field.collar.leaf(c1, c2, r)
        v = (EYE2 - shape_r) / np.sqrt(2.0)
        e[..., :2] = np.einsum("...ab,...ib->...ia", np.linalg.inv(v), e[..., :2])
        return e

    return FrameField(warped, fn, field.label + "@inf")
