"""Small gap limit eps = 0: beta Lap^2 u - tau Lap u = -lambda / (1 + u)^2."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import RadialGrid
from .model import Params
from .plate import PlateOperator
from .potential import TouchdownError
from .stationary import ContinuationTrace, Problem, SolveReport, continue_in_lambda


def smallgap_rhs(u, lam: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if np.min(u) <= -1.0 + 1e-12:
        raise TouchdownError(f"min u = {np.min(u):.6g} <= -1")
    return -lam / (1.0 + u) ** 2


@dataclass
class SmallGapProblem:
    params: Params
    grid: RadialGrid

    def __post_init__(self):
        if self.params.eps != 0.0:
            self.params = self.params.with_(eps=0.0)

    @classmethod
    def create(cls, p: Params, n: int = 64) -> "SmallGapProblem":
        return cls(p, RadialGrid(n))

    def problem(self, lam: float | None = None) -> Problem:
        # the cylinder is never used when eps = 0; a coarse one keeps Problem uniform
        if getattr(self, "_problem", None) is None:
            self._problem = Problem(self.params, self.grid.n, 3)
        pb = self._problem
        return pb if lam is None else pb.with_lambda(lam)


def _fixed_point_residual(plate, u, lam):
    return float(np.max(np.abs(u - plate.solve(smallgap_rhs(u, lam)))))


def solve_smallgap(pb: SmallGapProblem, lam: float, u0=None, method: str = "newton",
                   tol: float = 1e-10, max_iter: int | None = None, theta: float = 1.0) -> SolveReport:
    """Picard or Newton for the local nonlinearity.

    Newton uses the exact Jacobian A - diag(2 lambda / (1 + u)^3), assembled as
    a shifted plate operator so each step is one sparse solve.
    """
    prob = pb.problem(lam)
    n = pb.grid.n
    u = np.zeros(n + 1) if u0 is None else np.array(u0, dtype=float)
    if method == "picard":
        from .stationary import solve_stationary
        return solve_stationary(prob, u, "picard", tol, max_iter, theta)
    if method != "newton":
        raise ValueError(f"unknown method {method!r}")
    max_iter = 30 if max_iter is None else max_iter
    plate = prob.plate
    res, first = np.inf, None
    for it in range(1, max_iter + 1):
        try:
            res = _fixed_point_residual(plate, u, lam)
        except TouchdownError as exc:
            return SolveReport(False, it, res, u, None, str(exc))
        if not np.isfinite(res):
            return SolveReport(False, it, res, u, None, "non-finite iterate")
        if res <= tol * (1.0 + np.max(np.abs(u))):
            return SolveReport(True, it, res, u, -smallgap_rhs(u, 1.0))
        first = res if first is None else first
        if res > 1e3 * first:
            return SolveReport(False, it, res, u, None, "diverging")
        F = plate.apply(u) - smallgap_rhs(u, lam)
        jac = PlateOperator(pb.params, pb.grid, shift=-2.0 * lam / (1.0 + u) ** 3)
        try:
            du = jac.solve(-F[:n])
        except (np.linalg.LinAlgError, RuntimeError) as exc:
            return SolveReport(False, it, res, u, None, str(exc))
        u = u + du
    return SolveReport(False, max_iter, res, u, None, "maximum iterations reached")


def smallgap_fold(pb: SmallGapProblem, dlambda0: float = 0.5, method: str = "newton",
                  tol: float = 1e-10, min_step_ratio: float = 1e-4) -> ContinuationTrace:
    """Fold of the small gap branch; same marching rules as the free boundary case."""
    def solver(prob, u0):
        return solve_smallgap(pb, prob.params.lam, u0, method=method, tol=tol)
    return continue_in_lambda(pb.problem(0.0), dlambda0, min_step_ratio=min_step_ratio, solver=solver)
