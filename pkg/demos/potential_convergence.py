"""Electrostatic potential in the gap: flat-plate exactness and grid convergence."""
import numpy as np

from hingedmems import CylinderGrid, Params, RadialGrid, solve_potential
from hingedmems.potential import mms_convergence

cg = CylinderGrid(RadialGrid(64), 64)
phi = solve_potential(cg, np.zeros(65), Params(eps=0.1))
print(f"flat plate: max|phi - eta| = {np.abs(phi.values - cg.eta).max():.2e}")

for eps in (1.0, 0.1):
    errs, orders = mms_convergence(eps, (32, 64, 128))
    print(f"eps={eps}: errors {', '.join(f'{e:.2e}' for e in errs)}; orders {', '.join(f'{o:.2f}' for o in orders)}")
