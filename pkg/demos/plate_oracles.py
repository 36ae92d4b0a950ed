"""Hinged plate under uniform load, and the principal eigenvalue against Bessel roots."""
import numpy as np
from scipy.optimize import brentq
from scipy.special import j0

from hingedmems import Params, PlateOperator, RadialGrid, principal_eigenpair

g = RadialGrid(256)
for sigma, exact in ((0.0, -5 / 64), (1.0, -3 / 64)):
    u = PlateOperator(Params(sigma=sigma), g).solve(-np.ones(g.n))
    print(f"sigma={sigma}: u(0) = {u[0]:.8f}, closed form {exact:.8f}")

j01 = brentq(j0, 2.0, 3.0)
g = RadialGrid(512)
for tau in (0.0, 1.0):
    mu = principal_eigenpair(Params(sigma=1.0, tau=tau), g).mu1
    ref = j01**4 + tau * j01**2
    print(f"Navier plate, tau={tau}: mu1 = {mu:.6f}, Bessel value {ref:.6f}")
