"""Free-boundary solutions approach the small-gap model as eps shrinks."""
import numpy as np

from hingedmems import Params, Problem, continue_in_lambda, solve_stationary
from hingedmems.smallgap import SmallGapProblem, smallgap_fold, solve_smallgap

sg = SmallGapProblem.create(Params(), 32)
lam0 = smallgap_fold(sg).lambda_star
print(f"small-gap fold: {lam0:.6f}")

u_sg = solve_smallgap(sg, 0.5).solution
for eps in (0.2, 0.1, 0.05, 0.02):
    u = solve_stationary(Problem(Params(eps=eps, lam=0.5), 32, 16)).solution
    lam = continue_in_lambda(Problem(Params(eps=eps), 32, 16), 0.5).lambda_star
    print(f"eps={eps}: |u - u_sg| = {np.abs(u - u_sg).max():.2e}, lambda* = {lam:.6f}, gap {abs(lam - lam0):.2e}")
