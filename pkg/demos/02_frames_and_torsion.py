"""Constant frames on a collar, their torsion and the comparison with Levi-Civita."""
import numpy as np

from hypcs.cartan import compare_connections, frame_jet, torsion_two_form, weitzenbock_shape
from hypcs.frames import fermi_frame, tilted, twisted, verify_constant
from hypcs.renorm import default_radii
from hypcs.scenarios import Tube
from hypcs.spectral import ChartGrid

tube = Tube(1.0, 2.0)
collar = tube.collar(ChartGrid(32, 32))
fermi = fermi_frame(collar, tube)
frames = {"fermi": fermi, "twisted(1,0)": twisted(fermi, 1, 0), "tilted(0.3)": tilted(fermi, 0.3)}

for name, frame in frames.items():
    print(f"\n{name}")
    print("  constancy deviation over [0, 4]:", verify_constant(frame, default_radii()))
    for r in (0.0, 2.0):
        jet = frame_jet(frame, r)
        tor = torsion_two_form(jet)
        cmp = compare_connections(jet)
        tau = weitzenbock_shape(jet).torsion
        print(f"  r={r}: max |tau| {np.abs(tau).max():.4f}, formula disagreement {tor.discrepancy:.1e},"
              f" comparison residual {max(cmp.shape_residual, cmp.mean_residual, cmp.normal_leak):.1e}")
