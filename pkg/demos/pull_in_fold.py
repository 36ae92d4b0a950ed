"""Continuation in lambda up to the pull-in fold, compared with the eigenvalue bound."""
from hingedmems import Params, Problem, continue_in_lambda, principal_eigenpair

for sigma in (-0.5, 0.0, 0.5):
    pb = Problem(Params(eps=0.1, sigma=sigma), 32, 16)
    tr = continue_in_lambda(pb, 0.5)
    mu1 = principal_eigenpair(pb.params, pb.radial).mu1
    lo, hi = tr.bracket
    print(f"sigma={sigma:+.1f}: lambda* in [{lo:.6f}, {hi:.6f}], "
          f"{len(tr.accepted)} accepted steps, mu1 = {mu1:.4f}")
