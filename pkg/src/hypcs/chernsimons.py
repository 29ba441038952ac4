"""Chern-Simons densities of frame fields for SO(3) and PSL(2, C).

Densities are scalars against the Riemannian volume form of the collar
(equivalently ``da_r ^ dr``).  The invariant pairing on matrices is
``<a, b> = -tr(ab) / (8 pi^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cartan import (
    CYCLIC,
    FrameJet,
    constant_curvature,
    forms_on_coordinates,
    frame_jet,
    levi_civita_forms,
    radial_step,
    weitzenbock_shape,
)
from .errors import DomainError
from .frames import FrameField
from .hypgeom import align_sign, frame_to_isometry

PAIRING = -1.0 / (8 * np.pi**2)


def cs_density(forms: np.ndarray, curvature: np.ndarray | None = None) -> np.ndarray:
    """``<omega ^ Omega> - <omega ^ [omega ^ omega]> / 6`` on ``(E1, E2, E3)``.

    ``forms`` is ``[..., k, i, j]`` and ``curvature`` is ``[..., a, b, i, j]``.
    """
    curvature = constant_curvature() if curvature is None else curvature
    linear = sum(
        np.einsum("...ij,...ji->...", forms[..., i, :, :], curvature[..., j, k, :, :]) for i, j, k in CYCLIC
    )
    w1, w2, w3 = forms[..., 0, :, :], forms[..., 1, :, :], forms[..., 2, :, :]
    cubic = np.trace(w1 @ (w2 @ w3 - w3 @ w2), axis1=-2, axis2=-1)
    return PAIRING * linear - PAIRING * cubic


def so3_cs_pullback(jet: FrameJet) -> np.ndarray:
    """Pullback of the Levi-Civita Chern-Simons form by the frame."""
    return cs_density(levi_civita_forms(jet))


def adapted_reduction(jet: FrameJet, forms: np.ndarray | None = None, tol: float = 1e-9) -> np.ndarray:
    """``K_r omega^1_2(d_r) / (4 pi^2)`` for frames whose third vector is ``d_r``."""
    if np.max(np.abs(jet.frame[..., 2, :] - np.array([0.0, 0.0, 1.0]))) > tol:
        raise DomainError("frame is not adapted to the foliation")
    forms = levi_civita_forms(jet) if forms is None else forms
    gauss = jet.field.collar.leaf_geometry(jet.r).gauss
    return gauss * forms[..., 2, 0, 1] / (4 * np.pi**2)


# the exact term of the PSL(2, C) decomposition


def exact_form(jet: FrameJet, forms: np.ndarray | None = None) -> np.ndarray:
    """Chart components ``beta[..., mu, nu]`` of ``sum_cyc eps^i ^ omega^j_k``."""
    forms = levi_civita_forms(jet) if forms is None else forms
    coords = forms_on_coordinates(jet, forms)
    eps = jet.coframe
    beta = sum(
        np.einsum("...m,...n->...mn", eps[..., i, :], coords[..., :, j, k]) for i, j, k in CYCLIC
    )
    return beta - np.swapaxes(beta, -1, -2)


def exact_term_density(field: FrameField, r: float, h: float | None = None) -> np.ndarray:
    """``-d beta / 4`` against the volume form."""
    h = radial_step(r) if h is None else h
    grid = field.grid
    jet = frame_jet(field, r)
    beta = exact_form(jet)
    up, down = exact_form(frame_jet(field, r + h)), exact_form(frame_jet(field, r - h))
    div = (
        grid.deriv(beta[..., 1, 2], 0)
        + grid.deriv(beta[..., 2, 0], 1)
        + (up[..., 0, 1] - down[..., 0, 1]) / (2 * h)
    )
    return -0.25 * div / jet.volume_density


def exact_form_on_leaf(jet: FrameJet) -> np.ndarray:
    """Restriction of ``beta`` to the leaf against the area form."""
    return exact_form(jet)[..., 0, 1] / jet.area_density


def mean_curvature_gap(jet: FrameJet) -> np.ndarray:
    """``H_LC - H^s`` on the leaf; equals minus the leaf restriction of ``beta``."""
    c1, c2 = jet.field.grid.nodes()
    shape = jet.field.collar.leaf(c1, c2, jet.r)[1]
    return np.trace(shape, axis1=-2, axis2=-1) - weitzenbock_shape(jet).mean


# PSL(2, C)


def _isometry_field(field: FrameField):
    collar = field.collar

    def at(c1, c2, r):
        frame = field(c1, c2, r)
        point, jac = collar.frame_data(c1, c2, r)
        return frame_to_isometry(point, np.einsum("...im,...ma->...ia", frame, jac))

    return at


def maurer_cartan(field: FrameField, r: float, h: float = 1e-4):
    """``g^-1 dg`` on chart coordinates for the lift ``g`` of the frame.

    Central differences with the sign of each stencil point continued from
    the centre.  Returns the centre lift and ``mu[..., nu, :, :]``.
    """
    at = _isometry_field(field)
    c1, c2 = field.grid.nodes()
    g0 = at(c1, c2, r)
    inv = np.linalg.inv(g0)
    hr = radial_step(r, h)
    shifts = ((h, 0.0, 0.0), (0.0, h, 0.0), (0.0, 0.0, hr))
    mu = []
    for d1, d2, dr in shifts:
        plus = align_sign(at(c1 + d1, c2 + d2, r + dr), g0)
        minus = align_sign(at(c1 - d1, c2 - d2, r - dr), g0)
        mu.append(inv @ (plus - minus) / (2 * (d1 + d2 + dr)))
    return g0, np.stack(mu, axis=-3)


def psl2_cs_pullback(field: FrameField, r: float, h: float = 1e-4) -> np.ndarray:
    """``4 i pi^2`` times the pullback of the PSL(2, C) Chern-Simons form, i.e. ``i h* ^ e* ^ f*``."""
    _, mu = maurer_cartan(field, r, h)
    on_frame = np.einsum("...an,...nxy->...axy", field.on_grid(r), mu)
    dual = np.stack([on_frame[..., 0, 0], on_frame[..., 0, 1], on_frame[..., 1, 0]], axis=-1)
    return 1j * np.linalg.det(dual)


@dataclass
class Decomposition:
    psl: np.ndarray
    volume: np.ndarray
    exact: np.ndarray
    so3: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        return np.abs(self.psl - (self.volume + self.exact + 1j * np.pi**2 * self.so3))


def decomposition_residual(field: FrameField, r: float) -> Decomposition:
    """Pointwise pieces of ``i h*^e*^f* = dvol - d(beta)/4 + i pi^2 cs``."""
    jet = frame_jet(field, r)
    return Decomposition(
        psl=psl2_cs_pullback(field, r),
        volume=np.ones(jet.frame.shape[:-2]),
        exact=exact_term_density(field, r),
        so3=so3_cs_pullback(jet),
    )


# gauge changes


def _pair_wedge(a1, a2, b1, b2):
    """``<alpha ^ beta>(d1, d2)`` for matrix-valued 1-forms."""
    tr = lambda x, y: np.trace(x @ y, axis1=-2, axis2=-1)
    return PAIRING * (tr(a1, b2) - tr(a2, b1))


@dataclass
class GaugeTerms:
    boundary: np.ndarray
    wess_zumino: np.ndarray


def gauge_transform_terms(jet: FrameJet, gauge, forms: np.ndarray | None = None) -> GaugeTerms:
    """Terms relating the densities of ``s`` and ``s g`` for a gauge ``gauge(c1, c2, r)``.

    ``boundary`` is ``<Ad(g^-1) omega ^ g^-1 dg>`` restricted to the leaf against
    the area form; ``wess_zumino`` is ``-<mu ^ [mu ^ mu]> / 6`` pulled back by
    ``g`` against the volume form.
    """
    forms = levi_civita_forms(jet) if forms is None else forms
    grid = jet.field.grid
    c1, c2 = grid.nodes()
    r, h = jet.r, radial_step(jet.r)
    g = gauge(c1, c2, r)
    ginv = np.swapaxes(g, -1, -2)
    dg = [grid.deriv(g, 0), grid.deriv(g, 1), (gauge(c1, c2, r + h) - gauge(c1, c2, r - h)) / (2 * h)]
    mc = np.stack([ginv @ d for d in dg], axis=-3)
    coords = forms_on_coordinates(jet, forms)
    ad = [ginv @ coords[..., k, :, :] @ g for k in (0, 1)]
    boundary = _pair_wedge(ad[0], ad[1], mc[..., 0, :, :], mc[..., 1, :, :]) / jet.area_density
    mc_frame = np.einsum("...am,...mxy->...axy", jet.frame, mc)
    m1, m2, m3 = (mc_frame[..., a, :, :] for a in range(3))
    wz = -PAIRING * np.trace(m1 @ (m2 @ m3 - m3 @ m2), axis1=-2, axis2=-1)
    return GaugeTerms(boundary, wz)


def continue_lift(lifts: np.ndarray) -> np.ndarray:
    """Make a grid of SL(2, C) lifts sign-continuous.

    Sweeps the first grid axis along the first column, then each row along
    the second axis, aligning every entry with its predecessor.
    """
    out = np.array(lifts)
    for i in range(1, out.shape[0]):
        out[i, 0] = align_sign(out[i, 0], out[i - 1, 0])
    for j in range(1, out.shape[1]):
        out[:, j] = align_sign(out[:, j], out[:, j - 1])
    return out
