"""First variation of the energy against centred finite differences."""
import numpy as np

from hingedmems import CylinderGrid, Params, RadialGrid
from hingedmems.energy import variation_test_elec, variation_test_mech, variation_test_total

cg = CylinderGrid(RadialGrid(32), 32)
r = cg.radial.r
p = Params(eps=0.1, sigma=0.3, tau=1.0, lam=0.5)
rng = np.random.default_rng(0)
for k in range(3):
    a, b = rng.uniform(-1, 1, 2)
    u = 0.25 * (1 - r**2) * (a + b * r**2)
    v = (1 - r**2) * (1 + rng.uniform(-1, 1) * r**2)
    print(f"direction {k}: mechanical {variation_test_mech(cg.radial, u, v, p):.2e}, "
          f"electrostatic {variation_test_elec(cg, u, v, p):.2e}, total {variation_test_total(cg, u, v, p):.2e}")
