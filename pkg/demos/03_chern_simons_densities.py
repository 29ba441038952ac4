"""Chern-Simons densities of frames and the PSL(2,C) decomposition."""
import numpy as np

from hypcs.cartan import frame_jet
from hypcs.chernsimons import adapted_reduction, decomposition_residual, so3_cs_pullback
from hypcs.frames import adapted_frame, fermi_frame, regauged, rotation, tilted
from hypcs.scenarios import FuchsianStrip, Tube
from hypcs.spectral import ChartGrid

strip = FuchsianStrip(2.0, 1.0)
collar = strip.collar(strip.grid(16, 24))
gamma = 0.6
spinning = regauged(adapted_frame(collar), lambda c1, c2, r: rotation(2, gamma * r), "spin")

print("frame rotating about the normal along the flow, totally geodesic leaves")
print("r     density     adapted reduction   gamma sech^2 r / 4 pi^2")
for r in (0.0, 0.5, 1.5):
    jet = frame_jet(spinning, r)
    print(f"{r:<5} {so3_cs_pullback(jet).mean(): .8f}  {adapted_reduction(jet).mean(): .8f}"
          f"         {gamma / np.cosh(r) ** 2 / (4 * np.pi**2): .8f}")

tube = Tube(1.0, 2.0)
fermi = fermi_frame(tube.collar(ChartGrid(24, 24)), tube)
print("\nPSL(2,C) density = volume + exact term + i pi^2 cs, tilted frame")
for r in (0.0, 1.0, 3.0):
    parts = decomposition_residual(tilted(fermi, 0.3), r)
    print(f"  r={r}: mean density {parts.psl.mean():.6f}, max residual {parts.residual.max():.1e}")
