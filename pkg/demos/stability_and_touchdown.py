"""Below the fold a perturbation decays at the linearized rate; far above it the plate touches down."""
from hingedmems import (Params, Problem, continue_in_lambda, evolve, linearized_spectral_bound,
                        principal_eigenpair, solve_stationary)

pb0 = Problem(Params(eps=0.1), 32, 16)
lam = 0.1 * continue_in_lambda(pb0, 0.5).lambda_star
pb = pb0.with_lambda(lam)
U = solve_stationary(pb).solution
rate = linearized_spectral_bound(pb, U).min_real_part
r = pb.radial.r
tr = evolve(pb.params, U + 0.05 * (1 - r**2), 10 / rate, 1e-3, U, neta=16)
print(f"lambda={lam:.4f}: predicted rate {rate:.4f}, fitted {tr.fitted_rate:.4f}, "
      f"error {tr.error[0]:.2e} -> {tr.error[-1]:.2e} ({tr.outcome})")

mu1 = principal_eigenpair(Params(), pb.radial).mu1
tr = evolve(Params(eps=0.1, lam=1.05 * mu1), 0 * r, 5.0, 1e-3)
print(f"lambda=1.05 mu1={1.05 * mu1:.3f}: {tr.outcome} at t = {tr.times[-1]:.4f}, min u = {tr.u_min[-1]:.4f}")
