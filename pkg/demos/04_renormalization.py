"""Renormalized Chern-Simons invariants and the W-volume on a solid torus collar."""
import numpy as np

from hypcs.frames import fermi_frame, tilted
from hypcs.renorm import Scenario, default_radii, renormalize
from hypcs.scenarios import Tube
from hypcs.spectral import ChartGrid

tube = Tube(1.0, 2.0)
grid = ChartGrid(32, 32)
fermi = fermi_frame(tube.collar(grid), tube)

for frame in (fermi, tilted(fermi, 0.3), tilted(fermi, 0.5, 1, 1)):
    report = renormalize(Scenario(frame.collar, frame, tube.core_volume(grid), radii=default_radii(0.25, 4.0)))
    so3, psl = report.so3, report.psl
    print(f"\n{frame.label}")
    print(f"  SO(3): limit {so3.limit:.8f}, decay slope {so3.decay_slope:.3f},"
          f" divergent coefficient {so3.fitted_coefficient:.6f} (predicted {so3.divergent_coefficient:.6f})")
    print(f"  PSL:   limit {psl.limit:.8f}, decay slope {psl.decay_slope:.3f}")
    print(f"  W-volume {report.w.renormalized:.8f} (-pi L / 2 = {-np.pi:.8f}), slope {report.w.slope:.1e}")
    print(f"  |4 i pi^2 CS_PSL - W - i pi^2 CS_SO3| = {report.corollary_residual:.1e}")
