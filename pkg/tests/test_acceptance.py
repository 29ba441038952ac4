"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Main tube runs use the default 64 x 64 grid and 17 radii in [0, 4].
"""
import numpy as np
import pytest

from hypcs import cli
from hypcs.cartan import compare_connections, frame_jet, torsion_two_form
from hypcs.chernsimons import adapted_reduction, decomposition_residual, so3_cs_pullback
from hypcs.foliation import conformal_check, normal_hit_table
from hypcs.frames import adapted_frame, fermi_frame, regauged, rotation, tilted, twisted
from hypcs.invariants import embedded_leaf_residual
from hypcs.renorm import Scenario, default_radii, p_q_diagnostics, renormalize
from hypcs.scenarios import FuchsianStrip, GraphPatch, Tube, paraboloid
from hypcs.spectral import ChartGrid
from hypcs.surfaces import principal_curvatures

U0, LENGTH, N = 1.0, 2.0, 64
RADII = default_radii(0.25, 4.0)


@pytest.fixture
def verdict(capsys):
    def record(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"criterion {number} failed: {detail}"

    return record


@pytest.fixture(scope="module")
def tube():
    return Tube(U0, LENGTH)


@pytest.fixture(scope="module")
def grid():
    return ChartGrid(N, N)


@pytest.fixture(scope="module")
def collar(tube, grid):
    return tube.collar(grid)


@pytest.fixture(scope="module")
def frames(collar, tube):
    fermi = fermi_frame(collar, tube)
    return {
        "fermi": fermi,
        "twisted": twisted(fermi, 1, 0),
        "tilted": tilted(fermi, 0.3),
        "tilted-mixed": tilted(fermi, 0.5, 1, 1),
    }


@pytest.fixture(scope="module")
def bumped_collar():
    return Tube(U0, LENGTH, twist=0.3, bump=0.08, modes=(1, 1)).collar(ChartGrid(32, 32))


@pytest.fixture(scope="module")
def strip_collar():
    strip = FuchsianStrip(LENGTH, 1.0)
    return strip.collar(strip.grid(32, 32))


@pytest.fixture(scope="module")
def reports(tube, grid, frames):
    def build(name):
        return renormalize(Scenario(frames[name].collar, frames[name], tube.core_volume(grid),
                                    tube.euler_characteristic, radii=RADII))

    return {name: build(name) for name in ("fermi", "tilted", "tilted-mixed")}


def spinning(field, rate=0.6):
    return regauged(field, lambda c1, c2, r: rotation(2, rate * r + 2 * np.pi * np.asarray(c1)), "spin")


def test_gauss_equation(collar, bumped_collar, strip_collar, verdict):
    worst = {
        name: max(c.leaf_geometry(r).gauss_residual() for r in RADII)
        for name, c in (("tube", collar), ("bumped tube", bumped_collar), ("fuchsian", strip_collar))
    }
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    verdict(1, "Gauss equation |det B_r - 1 - K_int| < 1e-6", max(worst.values()) < 1e-6, detail)


def test_propagation_oracle(collar, bumped_collar, verdict):
    closed = 0.0
    for r in RADII:
        k = principal_curvatures(collar.leaf_geometry(r))
        expected = np.array([-1 / np.tanh(U0 + r), -np.tanh(U0 + r)])
        closed = max(closed, float(np.max(np.abs(k - expected))))
    embedded = max(embedded_leaf_residual(c, r) for c in (collar, bumped_collar) for r in (0.5, 2.0, 4.0))
    ok = closed < 1e-9 and embedded < 1e-6
    verdict(2, "propagated B_r vs closed form and flowed chart", ok,
            f"closed form {closed:.1e}, embedded {embedded:.1e}")


def test_conformal_equivalence(collar, bumped_collar, verdict):
    leaf = max(conformal_check(c.base_geometry(), r) for c in (collar, bumped_collar) for r in RADII)
    graph_metric, graph_diff, aniso = 0.0, 0.0, 0.0
    for scale in (0.25, 0.4):
        graph = paraboloid(scale, 1.0)
        c1, c2 = GraphPatch(graph, 0.5).grid(32).nodes()
        table = normal_hit_table(graph, c1, c2)
        graph_metric = max(graph_metric, table.critical_metric_residual)
        graph_diff = max(graph_diff, table.critical_differential_residual)
        aniso = max(aniso, float(np.max(table.anisotropy)))
    ok = leaf < 1e-10 and graph_metric < 1e-6 and graph_diff < 1e-6
    verdict(3, "metric at infinity conformal class and normal-hit map", ok,
            f"leaves {leaf:.1e}, w*I_inf - 2 Id {graph_metric:.1e}, "
            f"differential {graph_diff:.1e}, anisotropy {aniso:.1e}")


def test_torsion_triple_agreement(frames, bumped_collar, verdict):
    fields = dict(frames)
    fields["bumped tilted"] = tilted(adapted_frame(bumped_collar), 0.3, 1, 1)
    worst = max(torsion_two_form(frame_jet(f, r)).discrepancy for f in fields.values() for r in (0.0, 2.0, 4.0))
    adapted = [frames["fermi"], frames["twisted"], adapted_frame(bumped_collar)]
    exact_zero = all(
        np.all(getattr(torsion_two_form(frame_jet(f, r)), part) == 0.0)
        for f in adapted
        for r in (0.0, 2.0)
        for part in ("from_coframe", "from_second_form", "from_brackets")
    )
    verdict(4, "three torsion formulas agree; adapted frames have tau = 0", worst < 1e-5 and exact_zero,
            f"max disagreement {worst:.1e}, adapted exactly zero: {exact_zero}")


def test_comparison_identities(frames, bumped_collar, strip_collar, verdict):
    fields = dict(frames)
    fields["bumped tilted"] = tilted(adapted_frame(bumped_collar), 0.7, 1, 2)
    fields["fuchsian adapted"] = adapted_frame(strip_collar)
    worst = 0.0
    for f in fields.values():
        for r in (0.0, 2.0, 4.0):
            cmp = compare_connections(frame_jet(f, r))
            worst = max(worst, cmp.shape_residual, cmp.mean_residual, cmp.normal_leak)
    jet = frame_jet(frames["fermi"], 0.0)
    hs = float(np.max(np.abs(compare_connections(jet).mean_residual)))
    c1, c2 = jet.field.grid.nodes()
    mean = np.trace(frames["fermi"].collar.leaf(c1, c2, 0.0)[1], axis1=-2, axis2=-1)
    mean_gap = float(np.max(np.abs(mean + np.tanh(U0) + 1 / np.tanh(U0))))
    ok = worst < 1e-5 and hs < 1e-5 and mean_gap < 1e-5
    verdict(5, "Weitzenboeck vs Levi-Civita comparison identities", ok,
            f"max residual {worst:.1e}, adapted H_bar gap {mean_gap:.1e}")


def test_cs_reduction(frames, reports, bumped_collar, strip_collar, verdict):
    fields = [frames["fermi"], frames["twisted"], spinning(adapted_frame(bumped_collar)),
              spinning(adapted_frame(strip_collar))]
    worst = 0.0
    for f in fields:
        for r in (0.0, 1.0, 2.5, 4.0):
            jet = frame_jet(f, r)
            worst = max(worst, float(np.max(np.abs(so3_cs_pullback(jet) - adapted_reduction(jet)))))
    fermi_integral = float(np.max(np.abs(reports["fermi"].so3.raw)))
    ok = worst < 1e-5 and fermi_integral < 1e-6
    verdict(6, "general CS density equals the adapted reduction", ok,
            f"max deviation {worst:.1e}, Fermi collar integral {fermi_integral:.1e}")


def test_decomposition_random_cells(tube, verdict):
    rng = np.random.default_rng(7)
    worst, cells = {}, 0
    for trial in range(3):
        grid = ChartGrid(32, 32, origin=tuple(rng.uniform(0, 1, 2)))
        collar = tube.collar(grid)
        fermi = fermi_frame(collar, tube)
        fields = {"fermi": fermi, "twisted": twisted(fermi, 1, 0), "tilted": tilted(fermi, 0.3)}
        r = float(rng.uniform(0.0, 4.0))
        for name, f in fields.items():
            res = float(np.max(decomposition_residual(f, r).residual))
            worst[name] = max(worst.get(name, 0.0), res)
        cells += grid.n1 * grid.n2
    ok = max(worst.values()) < 1e-4 and cells >= 1000
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    verdict(7, f"PSL(2,C) decomposition at {cells} random cells per frame", ok, detail)


def test_w_volume_law(reports, verdict):
    w = reports["fermi"].w
    drift = float(np.max(np.abs(w.values + np.pi * LENGTH / 2)))
    ok = drift < 1e-4 and abs(w.slope) < 1e-5
    verdict(8, "W(rho) = -pi L / 2 with slope -pi chi = 0", ok, f"max |W + pi L/2| {drift:.1e}, slope {w.slope:.1e}")


def test_so3_convergence(reports, verdict):
    so3 = reports["tilted"].so3
    ok = so3.decay_slope <= -0.9 and so3.coefficient_mismatch < 1e-2
    verdict(9, "SO(3) renormalization converges with the predicted divergence", ok,
            f"slope {so3.decay_slope:.3f}, coefficient {so3.fitted_coefficient:.6f} "
            f"vs {so3.divergent_coefficient:.6f} ({100 * so3.coefficient_mismatch:.1e}%)")


def test_psl_convergence(reports, verdict):
    parts, ok = [], True
    for name in ("tilted", "tilted-mixed"):
        psl = reports[name].psl
        re = psl.divergent_coefficient.real
        gap = abs(psl.fitted_coefficient.real - re)
        rel = gap / abs(re) if abs(re) > 1e-8 else gap
        euler = np.max(np.abs(psl.corrected - psl.raw + psl.divergent_coefficient * np.exp(psl.radii)))
        ok &= psl.decay_slope <= -0.9 and rel < 1e-2 and euler < 1e-12
        parts.append(f"{name}: slope {psl.decay_slope:.3f}, Re coefficient {psl.fitted_coefficient.real:.5f} "
                     f"vs {re:.5f}")
    verdict(10, "PSL(2,C) renormalization converges; torus Euler term vanishes", ok, "; ".join(parts))


def test_corollary(reports, verdict):
    tilted_res = max(reports[n].corollary_residual for n in ("tilted", "tilted-mixed"))
    fermi = reports["fermi"]
    target = -np.pi * LENGTH / 2
    lhs = abs(fermi.psl.limit - target)
    rhs = abs(fermi.w.renormalized + 1j * np.pi**2 * fermi.so3.limit - target)
    ok = tilted_res < 1e-3 and lhs < 1e-4 and rhs < 1e-4
    verdict(11, "4 i pi^2 CS_PSL = W + i pi^2 CS_SO3", ok,
            f"tilted residual {tilted_res:.1e}, Fermi sides off -pi L/2 by {lhs:.1e} and {rhs:.1e}")


def test_p_vanishing_and_q_identity(frames, bumped_collar, verdict):
    bumped_ref = adapted_frame(bumped_collar)
    pairs = [(frames["fermi"], frames["fermi"]), (frames["tilted"], frames["fermi"]),
             (frames["tilted-mixed"], frames["fermi"]), (tilted(bumped_ref, 0.4, 1, 1), bumped_ref)]
    diags = [p_q_diagnostics(f, ref) for f, ref in pairs]
    p = max(d.p_max for d in diags)
    q = max(d.q_residual for d in diags)
    verdict(12, "P = 0 and the Q identity", p < 1e-5 and q < 1e-4, f"max |P| {p:.1e}, Q residual {q:.1e}")


def test_determinism(tmp_path, verdict):
    outputs = []
    for run in ("first", "second"):
        out = tmp_path / run
        code = cli.main(["run", "--set", "frame=tilted(0.3)", "--set", f"output_dir={out}", "--set", "name=det"])
        text = [(out / f"det{s}").read_bytes().replace(str(out).encode(), b"OUT") for s in (".csv", ".json")]
        outputs.append((code, text))
    same = outputs[0][1] == outputs[1][1]
    verdict(13, "identical configs give bit-identical CSV and JSON", same and outputs[0][0] == 0,
            f"exit codes {outputs[0][0]}, {outputs[1][0]}; identical: {same}")
