"""Gradient-flow dynamics u_t + A u = -lambda g(u) with a semi-implicit Euler step."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .energy import mechanical_energy, smallgap_electrostatic_energy, total_energy
from .grid import CylinderGrid, RadialGrid, l2_norm
from .model import Params
from .plate import PlateOperator
from .potential import TouchdownError, solve_potential, trace_force


class Stepper:
    """Keeps the factorisation of (I + dt A) for repeated steps."""

    def __init__(self, p: Params, cg: CylinderGrid, dt: float):
        if not dt > 0:
            raise ValueError("dt must be positive")
        self.params, self.cylinder, self.dt = p, cg, dt
        self.plate = PlateOperator(p, cg.radial, shift=1.0 / dt)

    def force_and_energy(self, u):
        p, rg = self.params, self.cylinder.radial
        em, _ = mechanical_energy(rg, u, p)
        if p.lam == 0.0:
            return np.zeros_like(u), em
        if p.eps == 0.0:
            if np.min(u) <= -1.0 + 1e-12:
                raise TouchdownError(f"min u = {np.min(u):.6g} <= -1")
            return 1.0 / (1.0 + u) ** 2, em + 2.0 * p.lam * smallgap_electrostatic_energy(rg, u)
        phi = solve_potential(self.cylinder, u, p)
        return trace_force(phi, p), total_energy(u, phi, p).e_total

    def advance(self, u, g=None):
        if g is None:
            g, _ = self.force_and_energy(u)
        # (I/dt + A) u_new = u/dt - lambda g
        return self.plate.solve(u / self.dt - self.params.lam * g)


def step(u, p: Params, dt: float, cg: CylinderGrid) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return Stepper(p, cg, dt).advance(u)


@dataclass
class EvolutionTrace:
    times: np.ndarray
    u_min: np.ndarray
    error: np.ndarray
    energy: np.ndarray
    outcome: str
    fitted_rate: float
    final: np.ndarray = field(repr=False, default=None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "u_min", "error", "energy"])
        for row in zip(self.times, self.u_min, self.error, self.energy):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"outcome": self.outcome, "fitted_rate": float(f"{self.fitted_rate:.17g}")}

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def fit_rate(times, error) -> float:
    """Minus the least-squares slope of ln(error) over the second half of the record."""
    t = np.asarray(times, dtype=float)
    e = np.asarray(error, dtype=float)
    half = len(t) // 2
    t, e = t[half:], e[half:]
    keep = np.isfinite(e) & (e > 0)
    if keep.sum() < 2:
        return float("nan")
    slope = np.polyfit(t[keep], np.log(e[keep]), 1)[0]
    return float(-slope)


def evolve(p: Params, u0, T: float, dt: float, target=None, *, nr: int | None = None,
           neta: int = 16, stop_gap: float = 1e-3, decay: float = 0.01,
           rate_tol: float = 1e-6) -> EvolutionTrace:
    """Integrate to time T or until min u <= -1 + stop_gap.

    Outcome ``converged`` means the final error is at most ``decay`` times the
    initial one when a target is given, otherwise that |du/dt|_inf has dropped
    below ``rate_tol``; reaching T without either is ``max_time``.
    """
    u = np.array(u0, dtype=float)
    n = len(u) - 1 if nr is None else nr
    if len(u) != n + 1:
        raise ValueError("u0 does not match the grid")
    cg = CylinderGrid(RadialGrid(n), neta)
    rg = cg.radial
    if abs(u[-1]) > 1e-12:
        raise ValueError("initial state must vanish at the rim")
    if np.min(u) <= -1.0 + stop_gap:
        raise ValueError("initial state is already at touchdown")
    target = None if target is None else np.asarray(target, dtype=float)
    stepper = Stepper(p, cg, dt)

    times, umins, errs, ens = [], [], [], []
    t, outcome, rate = 0.0, "max_time", np.inf
    nsteps = int(np.ceil(T / dt - 1e-9))
    for k in range(nsteps + 1):
        try:
            g, e = stepper.force_and_energy(u)
        except TouchdownError:
            outcome = "touchdown"
            break
        times.append(t)
        umins.append(float(np.min(u)))
        errs.append(l2_norm(rg, u - target) if target is not None else np.nan)
        ens.append(e)
        if k == nsteps:
            break
        new = stepper.advance(u, g)
        rate = float(np.max(np.abs(new - u))) / dt
        u = new
        t = (k + 1) * dt
        if np.min(u) <= -1.0 + stop_gap or not np.all(np.isfinite(u)):
            times.append(t)
            umins.append(float(np.min(u)))
            errs.append(l2_norm(rg, u - target) if target is not None else np.nan)
            ens.append(np.nan)
            outcome = "touchdown"
            break
    if outcome != "touchdown":
        if target is not None:
            outcome = "converged" if errs[-1] <= decay * errs[0] else "max_time"
        else:
            outcome = "converged" if rate <= rate_tol else "max_time"
    fitted = fit_rate(times, errs) if target is not None else float("nan")
    return EvolutionTrace(np.array(times), np.array(umins), np.array(errs), np.array(ens),
                          outcome, fitted, u)
