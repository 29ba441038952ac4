"""Command line driver: flat key=value configs, CSV tables and a JSON summary.

    hypcs run CONFIG [--set key=value ...] [--suite invariants]

Exit status is 0 on success, 2 for configuration errors and 3 when an
invariant fails or a numerical precondition breaks during the run.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError, NonConstantFrameError
from .foliation import normal_hit_table
from .frames import adapted_frame, fermi_frame, tilted, twisted
from .invariants import Check, frame_checks, geometry_checks, graph_checks, renorm_checks
from .renorm import Scenario, default_radii, renormalize
from .scenarios import GraphPatch, Tube, hemisphere, horosphere, paraboloid
from .spectral import ChartGrid
from .surfaces import check_convexity, fundamental_forms

SCHEMA = "hypcs.run/1"
THREADS_ENV = "HYPCS_THREADS"
TABLE_COLUMNS = (
    "rho", "so3_raw", "torsion_term", "F_so3", "w_volume",
    "psl2_re_raw", "psl2_im_raw", "F_psl_re", "F_psl_im",
)
GRAPH_COLUMNS = ("x1", "x2", "hit1", "hit2", "conformal_factor", "anisotropy")
FRAME_PATTERN = re.compile(r"^(fermi|adapted|twisted|tilted)\s*(?:\((.*)\))?$")


@dataclass
class ScenarioConfig:
    scenario: str = "tube"
    u0: float = 1.0
    length: float = 2.0
    phi: float = 0.0
    bump: float = 0.0
    bump_modes: str = "1,1"
    frame: str = "fermi"
    n1: int = 64
    n2: int = 64
    r_max: float = 4.0
    n_r: int = 17
    nodes: int = 4
    fd_step: float = 1e-4
    quadrature: str = "gauss-legendre"
    graph: str = "flat"
    graph_scale: float = 0.25
    graph_extent: float = 0.5
    output_dir: str = "."
    name: str = "run"

    @classmethod
    def from_pairs(cls, pairs: dict[str, str]) -> "ScenarioConfig":
        kinds = {f.name: f.type for f in fields(cls)}
        values = {}
        for key, raw in pairs.items():
            if key not in kinds:
                raise ConfigError(f"unknown config key '{key}'")
            cast = {"float": float, "int": int, "str": str}[kinds[key]]
            try:
                values[key] = cast(raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for '{key}': {raw!r}") from exc
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        if self.scenario not in ("tube", "graph-local"):
            raise ConfigError("scenario must be 'tube' or 'graph-local'")
        if not self.u0 > 0:
            raise ConfigError("u0 must be positive")
        if not self.length > 0:
            raise ConfigError("length must be positive")
        if min(self.n1, self.n2) < 16:
            raise ConfigError("grid sizes n1, n2 must be at least 16")
        if not self.r_max > 0 or self.n_r < 5:
            raise ConfigError("need r_max > 0 and at least 5 radial samples")
        if self.nodes < 1:
            raise ConfigError("nodes per radial panel must be positive")
        if not 0 < self.fd_step <= 1e-2:
            raise ConfigError("fd_step must lie in (0, 1e-2]")
        if self.quadrature != "gauss-legendre":
            raise ConfigError("only the 'gauss-legendre' radial quadrature is available")
        if self.graph not in ("flat", "paraboloid", "hemisphere"):
            raise ConfigError("graph must be flat, paraboloid or hemisphere")
        if not 0 < self.graph_extent < (0.9 if self.graph == "hemisphere" else np.inf):
            raise ConfigError("graph_extent out of range")
        self.frame_spec()
        self.modes()

    def frame_spec(self) -> tuple[str, tuple[float, ...]]:
        match = FRAME_PATTERN.match(self.frame.strip())
        if not match:
            raise ConfigError(f"unknown frame kind '{self.frame}'")
        kind, args = match.group(1), match.group(2)
        try:
            values = tuple(float(a) for a in args.split(",")) if args and args.strip() else ()
        except ValueError as exc:
            raise ConfigError(f"bad frame arguments in '{self.frame}'") from exc
        allowed = {"fermi": (0,), "adapted": (0,), "twisted": (0, 2), "tilted": (1, 3)}[kind]
        if len(values) not in allowed:
            raise ConfigError(f"frame '{kind}' takes {' or '.join(map(str, allowed))} arguments")
        if kind in ("twisted", "tilted") and any(v != int(v) for v in values[-2:] if len(values) > 1):
            raise ConfigError("twist winding numbers must be integers")
        return kind, values

    def modes(self) -> tuple[int, int]:
        try:
            m1, m2 = (int(v) for v in self.bump_modes.split(","))
        except ValueError as exc:
            raise ConfigError("bump_modes must be two integers 'm1,m2'") from exc
        return m1, m2

    def radii(self) -> np.ndarray:
        return default_radii(self.r_max / (self.n_r - 1), self.r_max)


def parse_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    pairs = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs[key] = value
    return pairs


def load_config(path: str | None, overrides: list[str]) -> ScenarioConfig:
    pairs = {}
    if path is not None:
        try:
            pairs = parse_config(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got '{item}'")
        key, value = (part.strip() for part in item.split("=", 1))
        pairs[key] = value
    return ScenarioConfig.from_pairs(pairs)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer") from exc


# scenario assembly


def build_tube_scenario(config: ScenarioConfig) -> tuple[Scenario, object]:
    """The scenario and the adapted constant frame its frame is measured against."""
    tube = Tube(config.u0, config.length, config.phi, config.bump, config.modes())
    grid_ = ChartGrid(config.n1, config.n2)
    collar = tube.collar(grid_)
    ok, top = check_convexity(collar.base_geometry())
    if not ok:
        raise ConfigError(f"base leaf is not convex (largest principal curvature {top:.3e})")
    kind, args = config.frame_spec()
    round_tube = config.bump == 0
    if kind == "fermi" and not round_tube:
        raise ConfigError("the Fermi frame needs a round tube (bump = 0)")
    reference = fermi_frame(collar, tube) if round_tube else adapted_frame(collar)
    if kind in ("fermi", "adapted"):
        frame = reference if kind == "fermi" else adapted_frame(collar)
    elif kind == "twisted":
        n = tuple(int(v) for v in args) or (1, 0)
        frame = twisted(reference, *n)
    else:
        n = tuple(int(v) for v in args[1:]) or (0, 1)
        frame = tilted(reference, args[0], *n)
    scenario = Scenario(
        collar=collar,
        frame=frame,
        core_volume=tube.core_volume(grid_),
        euler_characteristic=tube.euler_characteristic,
        radii=config.radii(),
        nodes=config.nodes,
        workers=thread_count(),
        label=frame.label,
        fd_step=config.fd_step,
    )
    return scenario, reference


def graph_function(config: ScenarioConfig):
    if config.graph == "flat":
        return horosphere(1.0)
    if config.graph == "paraboloid":
        return paraboloid(config.graph_scale, 1.0)
    return hemisphere(1.0)


# outputs


def _number(x):
    """JSON-safe float: non-finite values become strings."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _complex(z):
    z = complex(z)
    return {"re": _number(z.real), "im": _number(z.imag)}


def _write_table(path: Path, columns, rows) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


CONSTANTS = {
    "pairing": "<a, b> = -tr(ab) / (8 pi^2)",
    "so3_counterterm": "exp(rho) / (4 sqrt(2) pi^2) * integral of tau(s_inf) da_inf",
    "psl_counterterm": "exp(rho) / (4 sqrt(2)) * integral of (H(s_inf) + i tau(s_inf)) da_inf + pi rho chi",
    "core_so3_cs": "0 by convention (collar integrals start at the base leaf)",
    "core_psl_term": "core volume + integral of (H_LC - H_s) da / 4 over the base leaf",
    "core_volume": "2 pi L * integral of sinh(u)^2 / 2 over the chart (closed form per node)",
    "extrapolation": "Richardson on the last samples assuming an exp(-rho) remainder",
    "lift_sign": "first nonzero entry of the SL(2,C) lift has positive real part",
}


def tube_table(report) -> list[tuple]:
    so3, psl, w = report.so3, report.psl, report.w
    return [
        (
            so3.radii[k], so3.raw[k], so3.corrected[k] - so3.raw[k], so3.corrected[k], w.values[k],
            psl.raw[k].real, psl.raw[k].imag, psl.corrected[k].real, psl.corrected[k].imag,
        )
        for k in range(len(so3.radii))
    ]


def _series_summary(series) -> dict:
    return {
        "decay_slope": _number(series.decay_slope),
        "divergent_coefficient": _complex(series.divergent_coefficient),
        "fitted_coefficient": _complex(series.fitted_coefficient),
        "coefficient_mismatch": _number(series.coefficient_mismatch),
        "limit_error": _number(series.limit_error),
    }


def run_tube(config: ScenarioConfig, suite_only: bool) -> tuple[dict, list[Check], list[tuple]]:
    scenario, reference = build_tube_scenario(config)
    radii = scenario.radii
    checks = geometry_checks(scenario.collar, radii)
    checks += frame_checks(scenario.frame, reference, radii, config.fd_step)
    if suite_only:
        return {}, checks, []
    report = renormalize(scenario)
    checks += renorm_checks(report)
    summary = {
        "renormalized": {
            "cs_so3": _number(report.so3.limit),
            "cs_psl": _complex(report.psl.limit),
            "w_volume": _number(report.w.renormalized),
            "volume": _number(report.renormalized_volume),
            "corollary_residual": _number(report.corollary_residual),
        },
        "leading": {
            "torsion_at_infinity": _number(report.infinity.torsion),
            "mean_curvature_at_infinity": _number(report.infinity.mean),
            "euler_characteristic": report.euler_characteristic,
        },
        "series": {
            "so3": _series_summary(report.so3),
            "psl": _series_summary(report.psl),
            "w_volume": {"slope": _number(report.w.slope)},
        },
        "core_volume": _number(scenario.core_volume),
    }
    return summary, checks, tube_table(report)


def run_graph(config: ScenarioConfig) -> tuple[dict, list[Check], list[tuple]]:
    graph = graph_function(config)
    patch = GraphPatch(graph, config.graph_extent)
    grid_ = patch.grid(config.n1, config.n2)
    c1, c2 = grid_.nodes()
    table = normal_hit_table(graph, c1, c2)
    geom = fundamental_forms(patch.chart(grid_))
    checks = graph_checks(table, geom.gauss_residual())
    rows = [
        (*table.points[i, j], *table.image[i, j], table.factor[i, j], table.anisotropy[i, j])
        for i in range(grid_.n1)
        for j in range(grid_.n2)
    ]
    summary = {
        "normal_hit": {
            "max_anisotropy": _number(np.max(table.anisotropy)),
            "critical_metric_residual": _number(table.critical_metric_residual),
            "critical_differential_residual": _number(table.critical_differential_residual),
        }
    }
    return summary, checks, rows


def execute(config: ScenarioConfig, suite_only: bool = False) -> tuple[dict, list[Check]]:
    """Run a configuration, write its files and return the summary and checks."""
    if config.scenario == "tube":
        summary, checks, rows = run_tube(config, suite_only)
        columns = TABLE_COLUMNS
    else:
        summary, checks, rows = run_graph(config)
        columns = GRAPH_COLUMNS
    payload = {
        "schema": SCHEMA,
        "config": asdict(config),
        "constants": CONSTANTS,
        "invariants": [c.as_dict() for c in checks],
        "status": "pass" if all(c.passed for c in checks) else "fail",
        **summary,
    }
    if not suite_only:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_table(out / f"{config.name}.csv", columns, rows)
        _write_json(out / f"{config.name}.json", payload)
    return payload, checks


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="hypcs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario configuration")
    run.add_argument("config", nargs="?", help="flat key = value file (defaults if omitted)")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a key")
    run.add_argument("--suite", choices=["invariants"], help="only evaluate the invariant suite")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config, args.set)
        payload, checks = execute(config, suite_only=args.suite == "invariants")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NonConstantFrameError, np.linalg.LinAlgError) as exc:
        print(f"invariant failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    for check in checks:
        mark = "PASS" if check.passed else "FAIL"
        print(f"{mark}  {check.name:<32} {check.value: .3e}  (tol {check.tolerance:.0e})")
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print("failed invariants: " + ", ".join(failed), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
