"""Tube leaves: shape operators, normal flow and the metric at infinity."""
import numpy as np

from hypcs.foliation import conformal_check, metric_at_infinity, normal_hit_table
from hypcs.scenarios import GraphPatch, Tube, paraboloid
from hypcs.spectral import ChartGrid
from hypcs.surfaces import principal_curvatures

tube = Tube(1.0, 2.0)
collar = tube.collar(ChartGrid(32, 32))

print("r     k1          -coth(1+r)   k2          -tanh(1+r)   gauss residual")
for r in (0.0, 1.0, 2.0, 4.0):
    geom = collar.leaf_geometry(r)
    k = principal_curvatures(geom)[0, 0]
    print(f"{r:<5} {k[0]: .8f} {-1 / np.tanh(1 + r): .8f} {k[1]: .8f} {-np.tanh(1 + r): .8f}"
          f"  {geom.gauss_residual():.1e}")

base = collar.base_geometry()
inf = metric_at_infinity(base)
ratio = np.linalg.eigvals(np.linalg.solve(base.first[0, 0], inf.first[0, 0]))
print("\nI_inf relative to I on the base leaf:", np.sort(ratio.real))
print("closed form:", 0.5 * (1 + np.tanh(1.0)) ** 2, 0.5 * (1 + 1 / np.tanh(1.0)) ** 2)
print("conformal class of e^(-2r) I_r vs I_inf at r = 3:", conformal_check(base, 3.0))

graph = paraboloid(0.25, 1.0)
c1, c2 = GraphPatch(graph, 0.5).grid(16).nodes()
table = normal_hit_table(graph, c1, c2)
print("\nnormal-hit map of a paraboloid graph")
print("  pulled-back metric at the critical point minus 2 Id:", table.critical_metric_residual)
print("  differential minus (I + Hess/2):", table.critical_differential_residual)
print("  worst anisotropy over the patch:", table.anisotropy.max())
