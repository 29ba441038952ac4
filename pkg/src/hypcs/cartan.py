"""Connection forms, Weitzenboeck shape data and torsion of frame fields.

Everything is evaluated on the grid of the leaf at distance ``r``.  Chart
derivatives along the leaf are spectral; the radial derivative is a central
difference of the frame callable.  Connection forms are stored as
``W[..., k, i, j] = omega^i_j(E_k) = <E_i, grad_{E_k} E_j>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import FrameField

CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def radial_step(r: float, h: float = 1e-4) -> float:
    return h * max(1.0, abs(r))


@dataclass
class FrameJet:
    """A frame, its coframe, chart derivatives and Lie brackets on a leaf."""

    field: FrameField
    r: float
    frame: np.ndarray
    coframe: np.ndarray
    deriv: np.ndarray
    metric: np.ndarray
    brackets: np.ndarray

    @property
    def volume_density(self) -> np.ndarray:
        return np.sqrt(np.linalg.det(self.metric))

    @property
    def normal(self) -> np.ndarray:
        """Components ``N^i = <E_i, d_r>`` of the unit normal."""
        return self.frame[..., 2]

    @property
    def area_density(self) -> np.ndarray:
        return np.sqrt(np.linalg.det(self.metric[..., :2, :2]))


def frame_jet(field: FrameField, r: float, h: float | None = None) -> FrameJet:
    grid = field.grid
    c1, c2 = grid.nodes()
    h = radial_step(r) if h is None else h
    e = field(c1, c2, r)
    de = np.stack(
        [grid.deriv(e, 0), grid.deriv(e, 1), (field(c1, c2, r + h) - field(c1, c2, r - h)) / (2 * h)],
        axis=-3,
    )
    lie = np.einsum("...in,...njm->...ijm", e, de)
    lie = lie - np.swapaxes(lie, -3, -2)
    coframe = np.swapaxes(np.linalg.inv(e), -1, -2)
    return FrameJet(field, r, e, coframe, de, field.collar.metric(c1, c2, r), lie)


def bracket_pairing(jet: FrameJet) -> np.ndarray:
    """``P[..., i, j, k] = <[E_i, E_j], E_k>``."""
    return np.einsum("...ijm,...mn,...kn->...ijk", jet.brackets, jet.metric, jet.frame)


def levi_civita_forms(jet: FrameJet) -> np.ndarray:
    """Levi-Civita connection forms of an orthonormal frame from the Koszul formula."""
    p = bracket_pairing(jet)
    # <grad_{E_k} E_j, E_i> = ([kj]i - [ki]j - [ji]k) / 2
    return 0.5 * (
        np.einsum("...kji->...kij", p) - np.einsum("...kij->...kij", p) - np.einsum("...jik->...kij", p)
    )


def christoffel_symbols(field: FrameField, r: float, h: float | None = None) -> np.ndarray:
    """Christoffel symbols ``G[..., l, m, n]`` of the collar metric in chart coordinates."""
    grid = field.grid
    c1, c2 = grid.nodes()
    h = radial_step(r) if h is None else h
    metric = field.collar.metric
    g = metric(c1, c2, r)
    dg = np.stack(
        [grid.deriv(g, 0), grid.deriv(g, 1), (metric(c1, c2, r + h) - metric(c1, c2, r - h)) / (2 * h)],
        axis=-3,
    )
    # dg[..., a, m, n] = d_a g_mn
    low = 0.5 * (np.einsum("...mns->...smn", dg) + np.einsum("...nms->...smn", dg) - dg)
    return np.einsum("...ls,...smn->...lmn", np.linalg.inv(g), low)


def christoffel_forms(jet: FrameJet) -> np.ndarray:
    """Connection forms from Christoffel symbols, independent of the Koszul route."""
    gam = christoffel_symbols(jet.field, jet.r)
    cov = np.einsum("...kn,...njl->...kjl", jet.frame, jet.deriv) + np.einsum(
        "...lnm,...kn,...jm->...kjl", gam, jet.frame, jet.frame
    )
    return np.einsum("...il,...ls,...kjs->...kij", jet.frame, jet.metric, cov)


def forms_on_coordinates(jet: FrameJet, forms: np.ndarray) -> np.ndarray:
    """``omega(d_mu)`` from frame values, indexed ``[..., mu, i, j]``."""
    return np.einsum("...am,...aij->...mij", jet.coframe, forms)


def curvature_from_forms(field: FrameField, r: float, h: float | None = None) -> np.ndarray:
    """``Omega(E_a, E_b) = d omega + omega ^ omega`` by differentiating the forms.

    Returned as ``[..., a, b, i, j]``.
    """
    h = radial_step(r) if h is None else h
    grid = field.grid
    jet = frame_jet(field, r)
    w = levi_civita_forms(jet)
    dw = np.stack(
        [
            grid.deriv(w, 0),
            grid.deriv(w, 1),
            (levi_civita_forms(frame_jet(field, r + h)) - levi_civita_forms(frame_jet(field, r - h))) / (2 * h),
        ],
        axis=-4,
    )
    along = np.einsum("...an,...nbij->...abij", jet.frame, dw)
    lie = np.einsum("...abm,...cm->...abc", jet.brackets, jet.coframe)
    comm = np.einsum("...aik,...bkj->...abij", w, w)
    return along - np.swapaxes(along, -3, -4) - np.einsum("...abc,...cij->...abij", lie, w) + comm - np.swapaxes(
        comm, -3, -4
    )


def constant_curvature(kappa: float = -1.0) -> np.ndarray:
    """``Omega^i_j(E_a, E_b) = kappa (eps^i ^ eps^j)(E_a, E_b)`` indexed ``[a, b, i, j]``."""
    d = np.eye(3)
    return kappa * (np.einsum("ia,jb->abij", d, d) - np.einsum("ib,ja->abij", d, d))


@dataclass
class ShapeData:
    """Weitzenboeck shape operator of a leaf and its invariants."""

    shape: np.ndarray
    second: np.ndarray
    mean: np.ndarray
    gauss: np.ndarray
    torsion: np.ndarray


def weitzenbock_shape(jet: FrameJet) -> ShapeData:
    """``B(X) = -sum_i X(N^i) E_i`` on the leaf; torsion is the antisymmetric part of II."""
    grid = jet.field.grid
    n = jet.normal
    dn = np.stack([grid.deriv(n, 0), grid.deriv(n, 1)], axis=-2)
    shape = -np.einsum("...li,...im->...ml", dn, jet.frame[..., :2])
    first = jet.metric[..., :2, :2]
    second = np.einsum("...pl,...pm->...lm", shape, first)
    torsion = (second[..., 0, 1] - second[..., 1, 0]) / jet.area_density
    return ShapeData(
        shape=shape,
        second=second,
        mean=np.trace(shape, axis1=-2, axis2=-1),
        gauss=np.linalg.det(shape),
        torsion=torsion,
    )


@dataclass
class TorsionTwoForm:
    """Torsion density of a leaf against its area form, computed three ways."""

    from_coframe: np.ndarray
    from_second_form: np.ndarray
    from_brackets: np.ndarray

    @property
    def discrepancy(self) -> float:
        a, b, c = self.from_coframe, self.from_second_form, self.from_brackets
        return float(max(np.max(np.abs(a - b)), np.max(np.abs(a - c))))


def torsion_two_form(jet: FrameJet) -> TorsionTwoForm:
    grid = jet.field.grid
    eps = jet.coframe
    curl = grid.deriv(eps[..., 1], 0) - grid.deriv(eps[..., 0], 1)
    intrinsic = np.einsum("...i,...i->...", jet.normal, curl) / jet.area_density
    normal_part = np.einsum("...ijm,...mn->...ijn", jet.brackets, jet.metric)[..., 2]
    cyclic = -sum(jet.normal[..., i] * normal_part[..., j, k] for i, j, k in CYCLIC)
    return TorsionTwoForm(intrinsic, weitzenbock_shape(jet).torsion, cyclic)


def weitzenbock_torsion(jet: FrameJet) -> np.ndarray:
    """``T(E_i, E_j) = -[E_i, E_j]`` as chart components ``[..., i, j, mu]``."""
    return -jet.brackets


@dataclass
class ConnectionComparison:
    shape_residual: float
    normal_leak: float
    mean_residual: float


def compare_connections(jet: FrameJet, forms: np.ndarray | None = None) -> ConnectionComparison:
    """Residuals of ``B^s = B + sum N^i grad E_i`` and ``H^s = H - sum <N, grad_{E_i} E_i>``."""
    forms = levi_civita_forms(jet) if forms is None else forms
    c1, c2 = jet.field.grid.nodes()
    shape_lc = jet.field.collar.leaf(c1, c2, jet.r)[1]
    on_coords = forms_on_coordinates(jet, forms)[..., :2, :, :]
    moved = np.einsum("...i,...lji,...jm->...ml", jet.normal, on_coords, jet.frame)
    ws = weitzenbock_shape(jet)
    shape_res = np.max(np.abs(ws.shape - (shape_lc + moved[..., :2, :])))
    leak = np.max(np.abs(moved[..., 2, :]))
    mean_corr = np.einsum("...j,...iji->...", jet.normal, forms)
    mean_res = np.max(np.abs(ws.mean - (np.trace(shape_lc, axis1=-2, axis2=-1) - mean_corr)))
    return ConnectionComparison(float(shape_res), float(leak), float(mean_res))


def complex_mean_curvature(jet: FrameJet) -> np.ndarray:
    """``H^s + i tau^s`` against the area form."""
    ws = weitzenbock_shape(jet)
    return ws.mean + 1j * ws.torsion


def leading_integrand(jet: FrameJet) -> np.ndarray:
    """``sum_cyc <d_r, E_i> <d_r, [E_j, E_k]>`` against the area form."""
    normal_part = np.einsum("...ijm,...mn->...ijn", jet.brackets, jet.metric)[..., 2]
    return sum(jet.normal[..., i] * normal_part[..., j, k] for i, j, k in CYCLIC)
