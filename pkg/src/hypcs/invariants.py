"""Named numerical invariants with tolerances, evaluated on a scenario."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .cartan import compare_connections, frame_jet, radial_step, torsion_two_form
from .chernsimons import decomposition_residual
from .foliation import HyperbolicCollar, NormalHitTable, conformal_check
from .frames import FrameField, verify_constant
from .renorm import RenormReport, p_q_diagnostics
from .surfaces import SurfaceChart, check_convexity, fd_jet, fundamental_forms


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tolerance)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["value"] = float(self.value)
        out["passed"] = self.passed
        return out


def embedded_leaf_residual(collar: HyperbolicCollar, r: float, h: float = 1e-3) -> float:
    """Shape operator of the flowed chart against the propagated one."""
    flowed = SurfaceChart(fd_jet(lambda a, b: collar.embed(a, b, r), h), collar.grid, collar.chart.orientation)
    direct = fundamental_forms(flowed).shape
    return float(np.max(np.abs(direct - collar.leaf_geometry(r).shape)))


def geometry_checks(collar: HyperbolicCollar, radii) -> list[Check]:
    base = collar.base_geometry()
    radii = np.asarray(radii, dtype=float)
    gauss = max(collar.leaf_geometry(r).gauss_residual() for r in radii)
    mid = float(radii[len(radii) // 2])
    return [
        Check("convexity", check_convexity(base)[1], 1e-10),
        Check("gauss_equation", gauss, 1e-6),
        Check("self_adjoint_shape", base.self_adjoint_residual(), 1e-8),
        Check("embedded_propagation", embedded_leaf_residual(collar, mid), 1e-6),
        Check("conformal_infinity", max(conformal_check(base, r) for r in (0.5, 1.0, 2.0)), 1e-10),
    ]


def frame_checks(frame: FrameField, reference: FrameField, radii, step: float = 1e-4) -> list[Check]:
    """Differential identities of ``frame``; ``reference`` is an adapted constant frame."""
    radii = np.asarray(radii, dtype=float)
    probe = (float(radii[0]), float(radii[len(radii) // 2]), float(radii[-1]))
    ortho = max(frame.orthonormality_residual(r) for r in probe)
    torsion, shape, mean, leak, decomp = 0.0, 0.0, 0.0, 0.0, 0.0
    for r in probe:
        jet = frame_jet(frame, r, radial_step(r, step))
        torsion = max(torsion, torsion_two_form(jet).discrepancy)
        cmp = compare_connections(jet)
        shape, mean, leak = max(shape, cmp.shape_residual), max(mean, cmp.mean_residual), max(leak, cmp.normal_leak)
        decomp = max(decomp, float(np.max(decomposition_residual(frame, r).residual)))
    pq = p_q_diagnostics(frame, reference)
    return [
        Check("frame_orthonormality", ortho, 1e-9),
        Check("frame_constancy", verify_constant(frame, radii), 1e-6),
        Check("torsion_agreement", torsion, 1e-5),
        Check("comparison_shape", shape, 1e-5),
        Check("comparison_mean", mean, 1e-5),
        Check("comparison_normal_leak", leak, 1e-5),
        Check("psl_decomposition", decomp, 1e-4),
        Check("p_vanishing", pq.p_max, 1e-5),
        Check("q_identity", pq.q_residual, 1e-4),
    ]


def _slope_value(slope: float) -> float:
    """Map a decay slope onto a ``value <= tolerance`` check; flat series pass."""
    return -1.0 if slope == -np.inf else slope


def renorm_checks(report: RenormReport) -> list[Check]:
    so3, psl = report.so3, report.psl
    so3_ref = abs(so3.divergent_coefficient)
    re_ref = abs(np.real(psl.divergent_coefficient))
    so3_gap = so3.coefficient_mismatch if so3_ref > 1e-8 else abs(so3.fitted_coefficient)
    re_gap = np.real(psl.fitted_coefficient - psl.divergent_coefficient)
    re_gap = abs(re_gap) / re_ref if re_ref > 1e-8 else abs(re_gap)
    return [
        Check("so3_decay_slope", _slope_value(so3.decay_slope), -0.9),
        Check("so3_divergent_coefficient", so3_gap, 1e-2),
        Check("psl_decay_slope", _slope_value(psl.decay_slope), -0.9),
        Check("psl_divergent_coefficient_real", re_gap, 1e-2),
        Check("w_volume_slope", abs(report.w.slope + np.pi * report.euler_characteristic), 1e-5),
        Check("corollary", report.corollary_residual, 1e-3),
    ]


def graph_checks(table: NormalHitTable, gauss_residual: float) -> list[Check]:
    return [
        Check("gauss_equation", gauss_residual, 1e-6),
        Check("normal_hit_anisotropy", float(np.max(table.anisotropy)), 1e-8),
        Check("critical_metric_at_infinity", table.critical_metric_residual, 1e-6),
        Check("critical_differential", table.critical_differential_residual, 1e-6),
    ]
