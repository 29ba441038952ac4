"""Renormalized Chern-Simons invariants, W-volume and asymptotic diagnostics."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cartan import frame_jet, leading_integrand, radial_step, torsion_two_form, weitzenbock_shape
from .chernsimons import PAIRING, mean_curvature_gap, psl2_cs_pullback, so3_cs_pullback
from .errors import NonConstantFrameError
from .foliation import EYE2, HyperbolicCollar, WarpedCollar, propagate_forms
from .frames import FrameField, build_constant_frame, frame_at_infinity, gauge_between
from .spectral import gauss_legendre_panels

SQRT2 = np.sqrt(2.0)
SO3_BASIS = np.array(
    [
        [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
    ],
    dtype=float,
)


def default_radii(step: float = 0.25, top: float = 4.0) -> np.ndarray:
    return step * np.arange(int(round(top / step)) + 1)


@dataclass
class Scenario:
    """A constant frame on the collar of a convex leaf bounding a compact core."""

    collar: HyperbolicCollar
    frame: FrameField
    core_volume: float
    euler_characteristic: int = 0
    radii: np.ndarray = field(default_factory=default_radii)
    nodes: int = 4
    workers: int = 1
    label: str = "scenario"
    constant_from: float = 0.0
    fd_step: float = 1e-4

    @property
    def grid(self):
        return self.collar.grid


@dataclass
class AsymptoticSeries:
    """Raw and corrected values of a renormalized quantity at sample radii."""

    radii: np.ndarray
    raw: np.ndarray
    corrected: np.ndarray
    divergent_coefficient: complex
    fitted_coefficient: complex
    decay_slope: float
    limit: complex
    limit_error: float

    @property
    def coefficient_mismatch(self) -> float:
        ref = abs(self.divergent_coefficient)
        gap = abs(self.fitted_coefficient - self.divergent_coefficient)
        return gap / ref if ref > 0 else gap


def fit_divergence(radii: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Least squares coefficients of ``values`` on ``exp(r), r, 1, exp(-r)``."""
    basis = np.stack([np.exp(radii), radii, np.ones_like(radii), np.exp(-radii)], axis=-1)
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    return coef


def decay_slope(radii: np.ndarray, values: np.ndarray, floor: float) -> float:
    """Slope of ``log |F(r_{k+1}) - F(r_k)|`` against ``r_k``; ``-inf`` when flat."""
    diffs = np.abs(np.diff(values))
    keep = diffs > floor
    if keep.sum() < 3:
        return -np.inf
    return float(np.polyfit(radii[:-1][keep], np.log(diffs[keep]), 1)[0])


def richardson(radii: np.ndarray, values: np.ndarray) -> tuple[complex, float]:
    """Limit assuming an ``exp(-r)`` remainder, with the spread of the last two estimates."""

    def estimate(k):
        q = np.exp(-(radii[k] - radii[k - 1]))
        return (values[k] - q * values[k - 1]) / (1 - q)

    last, prev = estimate(-1), estimate(-2)
    return last, float(abs(last - prev))


def _series(radii, raw, correction, coefficient, noise: float) -> AsymptoticSeries:
    corrected = raw + correction
    scale = 1.0 + float(np.max(np.abs(raw)))
    fitted = fit_divergence(radii, raw.real)[0] + 1j * fit_divergence(radii, raw.imag)[0]
    if not np.iscomplexobj(raw):
        fitted = fitted.real
    limit, err = richardson(radii, corrected)
    return AsymptoticSeries(
        radii=radii,
        raw=raw,
        corrected=corrected,
        divergent_coefficient=coefficient,
        fitted_coefficient=fitted,
        decay_slope=decay_slope(radii, corrected, noise * scale),
        limit=limit,
        limit_error=err,
    )


@dataclass
class CollarProfile:
    """Integrals over ``[S, S_rho]`` and leaf integrals at the sample radii."""

    radii: np.ndarray
    volume: np.ndarray
    so3: np.ndarray
    psl: np.ndarray
    mean_lc: np.ndarray
    mean_gap: np.ndarray
    torsion: np.ndarray


def _leaf_integral(grid, density, weight):
    return grid.integrate(density * weight)


def _collar_sample(field: FrameField, r: float, with_psl: bool, step: float):
    jet = frame_jet(field, r, radial_step(r, step))
    vol = jet.volume_density
    grid = field.grid
    out = [grid.integrate(vol), grid.integrate(so3_cs_pullback(jet) * vol)]
    out.append(grid.integrate(psl2_cs_pullback(field, r, step) * vol) if with_psl else 0.0)
    return out


def _leaf_sample(field: FrameField, r: float, step: float):
    jet = frame_jet(field, r, radial_step(r, step))
    grid = field.grid
    da = jet.area_density
    geom = field.collar.leaf_geometry(r)
    return [
        grid.integrate(geom.mean * da),
        grid.integrate(mean_curvature_gap(jet) * da),
        grid.integrate(torsion_two_form(jet).from_coframe * da),
    ]


def collar_profile(scenario: Scenario, with_psl: bool = True) -> CollarProfile:
    radii = np.asarray(scenario.radii, dtype=float)
    nodes, weights = gauss_legendre_panels(radii, scenario.nodes)
    field_, step = scenario.frame, scenario.fd_step
    with ThreadPoolExecutor(max_workers=max(1, scenario.workers)) as pool:
        samples = list(pool.map(lambda r: _collar_sample(field_, float(r), with_psl, step), nodes.ravel()))
        leaves = list(pool.map(lambda r: _leaf_sample(field_, float(r), step), radii))
    samples = np.array(samples, dtype=complex).reshape(nodes.shape + (3,))
    panels = np.einsum("pn,pnq->pq", weights, samples)
    cumulative = np.concatenate([np.zeros((1, 3)), np.cumsum(panels, axis=0)])
    leaves = np.array(leaves)
    return CollarProfile(
        radii=radii,
        volume=cumulative[:, 0].real,
        so3=cumulative[:, 1].real,
        psl=cumulative[:, 2],
        mean_lc=leaves[:, 0],
        mean_gap=leaves[:, 1],
        torsion=leaves[:, 2],
    )


@dataclass
class InfinityData:
    """Integrals of the frame at infinity over the base leaf of the warped model."""

    torsion: float
    mean: float
    leading: float


def tail_frame(frame: FrameField, start: float) -> FrameField:
    """Constant frame agreeing with ``frame`` on the leaf ``r = start``."""
    collar = frame.collar

    def base(c1, c2):
        _, first, shape, _ = collar.base_point_forms(c1, c2)
        _, _, a = propagate_forms(first, shape, start)
        e = np.array(frame(c1, c2, start))
        e[..., :2] = np.einsum("...ab,...ib->...ia", a, e[..., :2])
        return e

    return build_constant_frame(base, collar, frame.label + "-tail")


def infinity_data(frame: FrameField, start: float = 0.0, step: float = 1e-4) -> InfinityData:
    """Torsion, mean curvature and leading integrand of the frame at infinity."""
    inf = frame_at_infinity(tail_frame(frame, start), WarpedCollar(frame.collar))
    jet = frame_jet(inf, 0.0, step)
    grid = frame.grid
    da = jet.area_density
    shape = weitzenbock_shape(jet)
    return InfinityData(
        torsion=float(grid.integrate(torsion_two_form(jet).from_coframe * da)),
        mean=float(grid.integrate(shape.mean * da)),
        leading=float(grid.integrate(leading_integrand(jet) * da)),
    )


def _check_constant(scenario: Scenario) -> None:
    start = scenario.constant_from
    tail = tail_frame(scenario.frame, start)
    c1, c2 = scenario.grid.nodes()
    drift = max(
        float(np.max(np.abs(scenario.frame(c1, c2, r) - tail(c1, c2, r))))
        for r in scenario.radii
        if r >= start
    )
    if drift > 1e-6:
        raise NonConstantFrameError(f"frame is not constant along the flow (drift {drift:.2e})")


def so3_renormalize(scenario: Scenario, profile: CollarProfile | None = None,
                    inf: InfinityData | None = None) -> AsymptoticSeries:
    """``int cs + exp(rho) / (4 sqrt2 pi^2) int tau(s_inf)`` at the sample radii.

    The core of the collar contributes nothing by convention.
    """
    _check_constant(scenario)
    profile = profile or collar_profile(scenario, with_psl=False)
    inf = inf or infinity_data(scenario.frame, scenario.constant_from, scenario.fd_step)
    radii = profile.radii
    coeff = -inf.torsion / (4 * SQRT2 * np.pi**2)
    return _series(radii, profile.so3, -coeff * np.exp(radii), coeff, noise=1e-10)


@dataclass
class WVolume:
    radii: np.ndarray
    values: np.ndarray
    slope: float

    @property
    def renormalized(self) -> float:
        return float(self.values[-1])


def w_volume(scenario: Scenario, profile: CollarProfile | None = None) -> WVolume:
    """``Vol(C_rho) + int H da_rho / 4`` at the sample radii, with the slope in ``rho``."""
    profile = profile or collar_profile(scenario, with_psl=False)
    values = scenario.core_volume + profile.volume + profile.mean_lc / 4
    slope = float(np.polyfit(profile.radii, values, 1)[0])
    return WVolume(profile.radii, values, slope)


def core_psl_term(scenario: Scenario, profile: CollarProfile) -> complex:
    """Contribution of the core: its volume plus the boundary term of the exact form."""
    return scenario.core_volume + profile.mean_gap[0] / 4


def psl2_renormalize(scenario: Scenario, profile: CollarProfile | None = None,
                     inf: InfinityData | None = None) -> AsymptoticSeries:
    """Renormalized ``4 i pi^2 CS`` of the developing section."""
    _check_constant(scenario)
    profile = profile or collar_profile(scenario)
    inf = inf or infinity_data(scenario.frame, scenario.constant_from, scenario.fd_step)
    radii = profile.radii
    raw = core_psl_term(scenario, profile) + profile.psl
    coeff = -(inf.mean + 1j * inf.torsion) / (4 * SQRT2)
    correction = -coeff * np.exp(radii) + np.pi * radii * scenario.euler_characteristic
    return _series(radii, raw, correction, coeff, noise=1e-7)


@dataclass
class RenormReport:
    so3: AsymptoticSeries
    psl: AsymptoticSeries
    w: WVolume
    infinity: InfinityData
    corollary_residual: float
    euler_characteristic: int

    @property
    def renormalized_volume(self) -> float:
        return self.w.renormalized + np.pi / 2 * self.euler_characteristic


def corollary_check(psl: AsymptoticSeries, so3: AsymptoticSeries, w: WVolume) -> float:
    """``|4 i pi^2 CS_PSL - (W + i pi^2 CS_SO3)|`` for the renormalized limits."""
    return float(abs(psl.limit - (w.renormalized + 1j * np.pi**2 * so3.limit)))


def renormalize(scenario: Scenario) -> RenormReport:
    profile = collar_profile(scenario)
    inf = infinity_data(scenario.frame, scenario.constant_from, scenario.fd_step)
    so3 = so3_renormalize(scenario, profile, inf)
    psl = psl2_renormalize(scenario, profile, inf)
    w = w_volume(scenario, profile)
    return RenormReport(so3, psl, w, inf, corollary_check(psl, so3, w), scenario.euler_characteristic)


@dataclass
class PQDiagnostics:
    p_max: float
    q_integral: float
    q_expected: float

    @property
    def q_residual(self) -> float:
        return abs(self.q_integral - self.q_expected)


def p_q_diagnostics(frame: FrameField, reference: FrameField) -> PQDiagnostics:
    """The functions whose vanishing and integral control the leading divergence.

    ``reference`` is an adapted constant frame; ``frame = reference g``.
    """
    grid = frame.grid
    c1, c2 = grid.nodes()
    jet = frame_jet(reference, 0.0)
    first, shape = reference.collar.leaf(c1, c2, 0.0)
    m = EYE2 - shape
    tang = jet.frame[..., :2, :2]
    brk = jet.brackets[..., :2, 2, :2]
    me = np.einsum("...ab,...ib->...ia", m, tang)
    mb = np.einsum("...ab,...ib->...ia", m, brk)
    pair = lambda x, y: np.einsum("...a,...ab,...b->...", x, first, y)
    p = (pair(me[..., 1, :], mb[..., 0, :]) - pair(me[..., 0, :], mb[..., 1, :])) / (2 * np.linalg.det(m))

    gauge = gauge_between(jet.frame, frame(c1, c2, 0.0), jet.metric)
    ginv = np.swapaxes(gauge, -1, -2)
    dg = np.stack([grid.deriv(gauge, 0), grid.deriv(gauge, 1)], axis=-3)
    q = 0.0
    for i in range(2):
        x = np.einsum("...ab,...b->...a", np.linalg.inv(m), tang[..., i, :])
        mc = ginv @ np.einsum("...l,...lxy->...xy", x, dg)
        ad = ginv @ SO3_BASIS[i] @ gauge
        q = q + PAIRING * np.trace(ad @ mc, axis1=-2, axis2=-1)
    q = 0.5 * np.linalg.det(m) * q
    inf = infinity_data(frame)
    return PQDiagnostics(
        p_max=float(np.max(np.abs(p))),
        q_integral=float(grid.integrate(q * jet.area_density)),
        q_expected=inf.leading / (4 * SQRT2 * np.pi**2),
    )
