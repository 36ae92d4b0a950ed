"""Stationary coupled problem: Picard and Newton solvers, S(rho) bookkeeping and
natural-parameter continuation in lambda with fold bracketing."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .grid import (CylinderGrid, RadialGrid, integrate_disc, laplacian_all, radial_derivative,
                   second_radial_derivative)
from .model import Params
from .plate import PlateOperator
from .potential import TouchdownError, force, solve_potential, trace_force, vertical_field

log = logging.getLogger(__name__)


class Problem:
    """Parameters plus the discretisation they are solved on."""

    def __init__(self, p: Params, nr: int = 32, neta: int = 16):
        self.params = p
        self.radial = RadialGrid(nr)
        self.cylinder = CylinderGrid(self.radial, neta)
        self.plate = PlateOperator(p, self.radial)

    @property
    def n(self) -> int:
        return self.radial.n

    def with_lambda(self, lam: float) -> "Problem":
        # the plate operator does not depend on lambda; share it
        other = object.__new__(Problem)
        other.params = self.params.with_(lam=lam)
        other.radial, other.cylinder, other.plate = self.radial, self.cylinder, self.plate
        return other

    def force(self, u) -> np.ndarray:
        return force(self.cylinder, u, self.params)

    def picard_map(self, u, g=None) -> np.ndarray:
        g = self.force(u) if g is None else g
        return self.plate.solve(-self.params.lam * g)

    def force_jacobian(self, u, step: float | None = None) -> np.ndarray:
        """Dense Dg(u) on nodes 0..n-1 by central differences, one column per node."""
        u = np.asarray(u, dtype=float)
        n = self.n
        d = 1e-6 * (1.0 + np.max(np.abs(u))) if step is None else step
        J = np.empty((n, n))
        e = np.zeros(n + 1)
        for j in range(n):
            e[j] = d
            J[:, j] = (self.force(u + e)[:n] - self.force(u - e)[:n]) / (2.0 * d)
            e[j] = 0.0
        return J


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    residual: float
    solution: np.ndarray
    force: np.ndarray | None
    message: str = ""


def picard_step(prob: Problem, u) -> np.ndarray:
    """A^{-1}(-lambda g(u))."""
    return prob.picard_map(np.asarray(u, dtype=float))


def solve_stationary(prob: Problem, u0=None, method: str = "picard", tol: float = 1e-10,
                     max_iter: int | None = None, theta: float = 1.0) -> SolveReport:
    """Solve A u = -lambda g(u) with the hinged conditions.

    Picard iterates u <- (1-theta) u + theta A^{-1}(-lambda g(u)) until the
    update is below tol (1 + |u|_inf).  Newton solves (A + lambda Dg(u)) du =
    -(A u + lambda g(u)) with a finite-difference Dg and stops on the same
    fixed-point residual |u - A^{-1}(-lambda g(u))|_inf.
    """
    n = prob.n
    u = np.zeros(n + 1) if u0 is None else np.array(u0, dtype=float)
    if method == "picard":
        return _picard(prob, u, tol, 200 if max_iter is None else max_iter, theta)
    if method == "newton":
        return _newton(prob, u, tol, 30 if max_iter is None else max_iter)
    raise ValueError(f"unknown method {method!r}")


def _picard(prob, u, tol, max_iter, theta):
    res = np.inf
    for it in range(1, max_iter + 1):
        try:
            g = prob.force(u)
        except TouchdownError as exc:
            return SolveReport(False, it, res, u, None, str(exc))
        new = prob.picard_map(u, g)
        res = float(np.max(np.abs(new - u)))
        if not np.isfinite(res):
            return SolveReport(False, it, res, u, None, "non-finite iterate")
        done = res <= tol * (1.0 + np.max(np.abs(u)))
        u = (1.0 - theta) * u + theta * new
        if done:
            try:
                g = prob.force(u)
            except TouchdownError as exc:
                return SolveReport(False, it, res, u, None, str(exc))
            return SolveReport(True, it, res, u, g)
    return SolveReport(False, max_iter, res, u, None, "maximum iterations reached")


def _newton(prob, u, tol, max_iter):
    n = prob.n
    lam = prob.params.lam
    A = prob.plate.matrix.toarray()
    res, first = np.inf, None
    for it in range(1, max_iter + 1):
        try:
            g = prob.force(u)
        except TouchdownError as exc:
            return SolveReport(False, it, res, u, None, str(exc))
        res = float(np.max(np.abs(u - prob.picard_map(u, g))))
        if not np.isfinite(res):
            return SolveReport(False, it, res, u, None, "non-finite iterate")
        if res <= tol * (1.0 + np.max(np.abs(u))):
            return SolveReport(True, it, res, u, g)
        first = res if first is None else first
        if res > 1e3 * first:
            return SolveReport(False, it, res, u, None, "diverging")
        F = A @ u[:n] + lam * g[:n]
        try:
            J = A + lam * prob.force_jacobian(u)
            du = lu_solve(lu_factor(J, check_finite=False), -F, check_finite=False)
        except (TouchdownError, ValueError, np.linalg.LinAlgError) as exc:
            return SolveReport(False, it, res, u, None, str(exc))
        u = u.copy()
        u[:n] += du
    return SolveReport(False, max_iter, res, u, None, "maximum iterations reached")


@dataclass
class MembershipReport:
    rho: float
    w23_norm: float
    min_gap: float
    in_S: bool


def w23_norm(g: RadialGrid, u) -> float:
    """Surrogate W^2_3 norm (int |u|^3 + |u_r|^3 + |Lap u|^3 + |u_rr|^3)^(1/3)."""
    u = np.asarray(u, dtype=float)
    dens = (np.abs(u) ** 3 + np.abs(radial_derivative(g, u)) ** 3
            + np.abs(laplacian_all(g, u)) ** 3 + np.abs(second_radial_derivative(g, u)) ** 3)
    return integrate_disc(g, dens) ** (1.0 / 3.0)


def membership(g: RadialGrid, u, rho: float, check_boundary: bool = True) -> MembershipReport:
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    u = np.asarray(u, dtype=float)
    norm = w23_norm(g, u)
    gap = float(np.min(u) + 1.0)
    hinged = abs(u[-1]) <= 1e-12 or not check_boundary
    return MembershipReport(rho, norm, gap, bool(hinged and norm < 1.0 / rho and gap > rho))


@dataclass
class InvariantReport:
    max_u: float
    min_u: float
    min_laplacian: float
    min_force: float
    min_dz_psi: float
    sup_psi_minus_M: float
    rim_value: float

    def ok(self, tol: float = 1e-6) -> bool:
        return (self.min_u > -1.0 and self.max_u <= tol and self.min_laplacian >= -tol
                and self.min_force >= 1.0 - tol and self.min_dz_psi >= 1.0 - tol
                and self.sup_psi_minus_M <= tol and self.rim_value <= tol)


def stationary_invariants(prob: Problem, u) -> InvariantReport:
    """Sign, Laplacian and field-strength properties every stationary state has."""
    u = np.asarray(u, dtype=float)
    lap = prob.plate.laplacian(u)
    if prob.params.eps == 0.0:
        g = 1.0 / (1.0 + u) ** 2
        dz, sup = 1.0 / (1.0 + u), 0.0
    else:
        phi = solve_potential(prob.cylinder, u, prob.params)
        g = trace_force(phi, prob.params)
        dz = vertical_field(phi)
        M = phi.gap[:, None] * phi.grid.eta[None, :] - u[:, None]
        sup = float(np.max(phi.values - M))
    return InvariantReport(float(np.max(u)), float(np.min(u)), float(np.min(lap)),
                           float(np.min(g)), float(np.min(dz)), sup, abs(float(u[-1])))


@dataclass
class Record:
    lam: float
    u_min: float
    iterations: int
    converged: bool


@dataclass
class ContinuationTrace:
    records: list[Record]
    lambda_star: float
    bracket: tuple[float, float]
    eps: float
    solutions: dict[float, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def accepted(self) -> list[Record]:
        return [r for r in self.records if r.converged]


def continue_in_lambda(prob: Problem, dlambda0: float, method: str = "newton", tol: float = 1e-10,
                       max_iter: int | None = None, min_step_ratio: float = 1e-4,
                       max_steps: int = 10_000, solver=None) -> ContinuationTrace:
    """March lambda up from 0 with warm starts, halving the step after each failure.

    Stops once the step falls below ``min_step_ratio * dlambda0``; the fold
    estimate is the midpoint of (last success, first failure above it).
    ``solver(prob, u0)`` may replace :func:`solve_stationary` (small gap model).
    """
    if not dlambda0 > 0:
        raise ValueError("dlambda0 must be positive")
    if solver is None:
        def solver(pb, u0):
            return solve_stationary(pb, u0, method=method, tol=tol, max_iter=max_iter)
    u = np.zeros(prob.n + 1)
    records = [Record(0.0, 0.0, 0, True)]
    solutions = {0.0: u.copy()}
    lam, hi, step = 0.0, np.inf, dlambda0
    for _ in range(max_steps):
        if step < min_step_ratio * dlambda0:
            break
        trial = lam + step
        if trial >= hi:
            step *= 0.5
            continue
        pb = prob.with_lambda(trial)
        rep = solver(pb, u)
        ok = rep.converged
        if ok:
            inv = stationary_invariants(pb, rep.solution)
            # the branch deepens monotonically with lambda
            ok = inv.ok() and inv.min_u <= float(np.min(u)) + 1e-12
            if not ok:
                log.debug("lambda=%.6g rejected by invariant suite: %s", trial, inv)
        records.append(Record(trial, float(np.min(rep.solution)), rep.iterations, bool(ok)))
        if ok:
            lam, u = trial, rep.solution
            solutions[trial] = u.copy()
        else:
            hi = trial
            step *= 0.5
    records.sort(key=lambda r: r.lam)
    return ContinuationTrace(records, 0.5 * (lam + hi), (lam, hi), prob.params.eps, solutions)


def trace_rows(trace: ContinuationTrace):
    return [(r.lam, r.u_min, r.iterations, r.converged) for r in trace.records]


def trace_csv(trace: ContinuationTrace) -> str:
    from .output import csv_text
    return csv_text(["lambda", "u_min", "iters", "converged"], trace_rows(trace))


def trace_summary(trace: ContinuationTrace, mu1: float | None = None) -> dict:
    lo, hi = trace.bracket
    return {"lambda_star": trace.lambda_star, "bracket_lo": lo, "bracket_hi": hi,
            "mu1": mu1, "eps": trace.eps}
