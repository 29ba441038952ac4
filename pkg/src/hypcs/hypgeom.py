"""Upper half-space geometry: points, isometries, frames and Fermi charts.

Points are arrays ``(..., 3)`` holding ``(x1, x2, t)`` with ``t > 0``.
Isometries are ``(..., 2, 2)`` complex arrays of determinant one, acting by
the quaternionic extension of Moebius maps.  A frame at a point is an array
``(..., 3, 3)`` whose rows are the three vectors in coordinate components.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DomainError

BASE_POINT = np.array([0.0, 0.0, 1.0])
BASE_FRAME = np.eye(3)


def _check_points(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3:
        raise DomainError("points need three coordinates")
    if np.any(p[..., 2] <= 0) or not np.all(np.isfinite(p)):
        raise DomainError("points must have finite coordinates and t > 0")
    return p


def metric_at(p: np.ndarray) -> np.ndarray:
    """Hyperbolic metric tensor ``I / t**2`` at ``p``."""
    p = _check_points(p)
    return np.eye(3) / p[..., 2, None, None] ** 2


def christoffel(p: np.ndarray) -> np.ndarray:
    """Christoffel symbols ``G[..., k, i, j]`` of the hyperbolic metric."""
    p = _check_points(p)
    d = np.eye(3)
    e3 = d[2]
    g = -(
        np.einsum("ki,j->kij", d, e3)
        + np.einsum("kj,i->kij", d, e3)
        - np.einsum("ij,k->kij", d, e3)
    )
    return g / p[..., 2, None, None, None]


def hyperbolic_distance(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p, q = _check_points(p), _check_points(q)
    sq = np.sum((p - q) ** 2, axis=-1)
    return np.arccosh(1.0 + sq / (2.0 * p[..., 2] * q[..., 2]))


# quaternions are (..., 4) arrays in the basis 1, i, j, k


def _qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def _qinv(a: np.ndarray) -> np.ndarray:
    conj = a * np.array([1.0, -1.0, -1.0, -1.0])
    return conj / np.sum(a * a, axis=-1, keepdims=True)


def _qcomplex(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(z.shape)
    return np.stack([z.real, z.imag, zero, zero], axis=-1)


def _qpoint(p: np.ndarray) -> np.ndarray:
    return np.concatenate([p, np.zeros(p.shape[:-1] + (1,))], axis=-1)


def _check_isometry(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    if g.shape[-2:] != (2, 2):
        raise DomainError("isometries are 2x2 matrices")
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
    if np.any(np.abs(det - 1.0) > 1e-8):
        raise DomainError("isometry matrices must have determinant one")
    return g


def apply_isometry(g: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Image of ``p`` under the Moebius extension of ``g``."""
    g, p = _check_isometry(g), _check_points(p)
    a, b, c, d = (_qcomplex(g[..., i, j]) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    q = _qpoint(p)
    out = _qmul(_qmul(a, q) + b, _qinv(_qmul(c, q) + d))
    return out[..., :3]


def isometry_differential(g: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Jacobian ``D[..., k, l] = d(g.p)^k / dp^l`` in coordinate components."""
    g, p = _check_isometry(g), _check_points(p)
    a, b, c, d = (_qcomplex(g[..., i, j]) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    q = _qpoint(p)
    inv_den = _qinv(_qmul(c, q) + d)
    image = _qmul(_qmul(a, q) + b, inv_den)
    left = a - _qmul(image, c)
    cols = []
    for l in range(3):
        dq = np.zeros(q.shape)
        dq[..., l] = 1.0
        cols.append(_qmul(_qmul(left, dq), inv_den)[..., :3])
    return np.stack(cols, axis=-1)


def normalize_sign(g: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Representative of ``+-g`` whose first nonzero entry has positive real part."""
    g = np.array(g, dtype=complex)
    flat = g.reshape(g.shape[:-2] + (4,))
    key = np.where(np.abs(flat.real) > tol, flat.real, flat.imag)
    first = np.argmax(np.abs(flat) > tol, axis=-1)
    lead = np.take_along_axis(key, first[..., None], axis=-1)[..., 0]
    return np.where((lead < 0)[..., None, None], -g, g)


def align_sign(g: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Choose the sign of ``g`` closest to ``ref``."""
    plus = np.sum(np.abs(g - ref) ** 2, axis=(-2, -1))
    minus = np.sum(np.abs(g + ref) ** 2, axis=(-2, -1))
    return np.where((minus < plus)[..., None, None], -g, g)


def _lift_base(p: np.ndarray) -> np.ndarray:
    """Translation-dilation taking the base point to ``p``; its differential is ``t``."""
    t = np.sqrt(p[..., 2])
    z = p[..., 0] + 1j * p[..., 1]
    m = np.zeros(p.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = t
    m[..., 0, 1] = z / t
    m[..., 1, 1] = 1.0 / t
    return m


def _su2_from_quat(quat: np.ndarray) -> np.ndarray:
    x, y, z, w = np.moveaxis(quat, -1, 0)
    u = np.empty(quat.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = w + 1j * z
    u[..., 0, 1] = 1j * x - y
    u[..., 1, 0] = 1j * x + y
    u[..., 1, 1] = w - 1j * z
    return u


def rotation_lift(rot: np.ndarray) -> np.ndarray:
    """SU(2) element fixing the base point whose differential there is ``rot``."""
    rot = np.asarray(rot, dtype=float)
    shape = rot.shape[:-2]
    quat = Rotation.from_matrix(rot.reshape(-1, 3, 3)).as_quat()
    return _su2_from_quat(quat.reshape(shape + (4,)))


def frame_to_isometry(p: np.ndarray, frame: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Isometry taking the base point and base frame to ``p`` and ``frame``.

    ``frame`` rows must be hyperbolic-orthonormal and positively oriented.
    The sign is normalized with :func:`normalize_sign`.
    """
    p = _check_points(p)
    frame = np.asarray(frame, dtype=float)
    rot = np.swapaxes(frame, -1, -2) / p[..., 2, None, None]
    gram = np.swapaxes(rot, -1, -2) @ rot
    if np.any(np.abs(gram - np.eye(3)) > tol) or np.any(np.linalg.det(rot) < 0):
        raise DomainError("frame is not orthonormal and positively oriented")
    return normalize_sign(_lift_base(p) @ rotation_lift(rot))


def isometry_to_frame(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Image of the base point and base frame under ``g``."""
    g = _check_isometry(g)
    base = np.broadcast_to(BASE_POINT, g.shape[:-2] + (3,))
    point = apply_isometry(g, base)
    frame = np.swapaxes(isometry_differential(g, base), -1, -2)
    return point, frame


def normal_flow(p: np.ndarray, n: np.ndarray, r, tol: float = 1e-8):
    """Point at arclength ``r`` along the geodesic from ``p`` with unit velocity ``n``.

    Returns the point and the parallel transport matrix from ``p`` to it,
    both in coordinate components.
    """
    p = _check_points(p)
    v = np.asarray(n, dtype=float) / p[..., 2, None]
    if np.any(np.abs(np.sum(v * v, axis=-1) - 1.0) > tol):
        raise DomainError("initial velocity must be a unit vector")
    r = np.asarray(r, dtype=float)
    horiz = np.hypot(v[..., 0], v[..., 1])
    angle = np.arctan2(horiz, v[..., 2])
    safe = np.where(horiz > 0, horiz, 1.0)
    axis = np.stack([-v[..., 1] / safe, v[..., 0] / safe, np.zeros_like(horiz)], axis=-1)
    axis = np.where((horiz > 0)[..., None], axis, np.array([1.0, 0.0, 0.0]))
    half = angle / 2
    quat = np.concatenate([np.sin(half)[..., None] * axis, np.cos(half)[..., None]], axis=-1)
    u = _su2_from_quat(quat)
    shape = np.broadcast(r, horiz).shape
    dil = np.zeros(shape + (2, 2), dtype=complex)
    dil[..., 0, 0] = np.exp(r / 2)
    dil[..., 1, 1] = np.exp(-r / 2)
    m = _lift_base(p)
    inv = lambda x: np.linalg.inv(x)
    translation = m @ u @ dil @ inv(u) @ inv(m)
    p = np.broadcast_to(p, shape + (3,))
    return apply_isometry(translation, p), isometry_differential(translation, p)


def fermi_embed(u, s, theta) -> np.ndarray:
    """Point at distance ``u`` from the vertical geodesic, height ``exp(s)``, angle ``theta``.

    The angle runs clockwise seen from above so that the coordinate order
    ``(s, theta, u)`` is positively oriented.
    """
    u, s, theta = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (u, s, theta)))
    if np.any(u <= 0):
        raise DomainError("Fermi radius must be positive")
    e = np.exp(s)
    th = np.tanh(u)
    return np.stack([e * th * np.cos(theta), -e * th * np.sin(theta), e / np.cosh(u)], axis=-1)


def fermi_jet(u, s, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fermi embedding with first and second derivatives in ``(u, s, theta)``.

    Returns ``X (..., 3)``, ``dX (..., 3, 3)`` indexed ``[coord, component]``
    and ``d2X (..., 3, 3, 3)`` indexed ``[coord, coord, component]``.
    """
    u, s, theta = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (u, s, theta)))
    e = np.exp(s)
    th, sh = np.tanh(u), 1.0 / np.cosh(u)
    c, sn = np.cos(theta), np.sin(theta)
    z = np.zeros_like(u)
    x = np.stack([e * th * c, -e * th * sn, e * sh], axis=-1)
    xu = np.stack([e * sh**2 * c, -e * sh**2 * sn, -e * sh * th], axis=-1)
    xt = np.stack([-e * th * sn, -e * th * c, z], axis=-1)
    xuu = np.stack(
        [-2 * e * sh**2 * th * c, 2 * e * sh**2 * th * sn, e * (sh * th**2 - sh**3)], axis=-1
    )
    xut = np.stack([-e * sh**2 * sn, -e * sh**2 * c, z], axis=-1)
    xtt = np.stack([-e * th * c, e * th * sn, z], axis=-1)
    d1 = np.stack([xu, x, xt], axis=-2)
    d2 = np.stack(
        [
            np.stack([xuu, xu, xut], axis=-2),
            np.stack([xu, x, xt], axis=-2),
            np.stack([xut, xt, xtt], axis=-2),
        ],
        axis=-3,
    )
    return x, d1, d2


@dataclass(frozen=True)
class FermiChart:
    """Fermi coordinates about the vertical geodesic with a loxodromic quotient.

    ``(u, s, theta)`` is identified with ``(u, s + length, theta + twist)`` and
    with ``(u, s, theta + 2 pi)``.
    """

    length: float
    twist: float = 0.0

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError("translation length must be positive")

    def embed(self, u, s, theta) -> np.ndarray:
        return fermi_embed(u, s, theta)

    def metric(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape + (3, 3))
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = np.cosh(u) ** 2
        out[..., 2, 2] = np.sinh(u) ** 2
        return out

    def holonomy(self) -> np.ndarray:
        """Deck transformation realizing the ``(s, theta)`` shift."""
        w = (self.length - 1j * self.twist) / 2
        return np.array([[np.exp(w), 0], [0, np.exp(-w)]])
