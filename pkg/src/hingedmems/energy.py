"""Mechanical, electrostatic and total energies; finite-difference checks of
their first variations.

Dimensionless energies::

    E_m(u)   = beta int [ (Lap u)^2 / 2 + (1 - sigma)(u_12^2 - u_11 u_22) ] + tau/2 int |grad u|^2
    E_e(u)   = -1/2 int_{Omega(u)} eps^2 |grad' psi|^2 + (d_z psi)^2
    E_lam(u) = E_m(u) + 2 lam E_e(u)

so that dE_lam(u; v) = int (A u + lam g(u)) v + 2 pi beta (Lap u - (1-sigma) kappa u_r)(1) v_r(1)
and critical points solve A u = -lam g(u) with the hinged conditions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (CylinderGrid, RadialGrid, high_order_operators, inner, integrate_disc,
                   radial_derivative)
from .model import Params
from .plate import PlateOperator
from .potential import PotentialField, solve_potential, trace_force


@dataclass
class EnergyReport:
    e_mech: float
    e_elec: float
    e_total: float
    bending_lower_bound: float


def _hessian(g: RadialGrid, u):
    """Radial Hessian eigenvalues (u_rr, u_r / r); on the axis both equal u_rr(0)."""
    D1, D2, _, _ = high_order_operators(g)
    a = D2 @ u
    u_r = D1 @ u
    b = np.empty_like(a)
    b[0] = a[0]
    b[1:] = u_r[1:] / g.r[1:]
    return a, b, u_r


def mechanical_energy(g: RadialGrid, u, p: Params) -> tuple[float, float]:
    """(E_m(u), Young-inequality lower bound of the bending part).

    Uses the sixth-order stencils and quadrature of the grid module, so that the
    variation identity can be checked well below the plate scheme's own error.
    """
    u = np.asarray(u, dtype=float)
    *_, w = high_order_operators(g)
    a, b, u_r = _hessian(g, u)
    # u_12^2 - u_11 u_22 = -u_rr u_r / r for radial fields
    bending = 0.5 * (a + b) ** 2 - (1.0 - p.sigma) * a * b
    e = p.beta * (w @ bending) + 0.5 * p.tau * (w @ u_r**2)
    bound = 0.5 * p.beta * (1.0 - abs(p.sigma)) * (w @ (a**2 + b**2))
    return float(e), float(bound)


def electrostatic_energy(phi: PotentialField) -> float:
    """-1/2 of the scaled Dirichlet integral of psi over the deflected gap."""
    cg = phi.grid
    rg = cg.radial
    v, k, w = phi.values, cg.k, phi.gap
    h = rg.h
    phi_r = np.empty_like(v)
    phi_r[0] = 0.0
    phi_r[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    phi_r[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    phi_e = np.empty_like(v)
    phi_e[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2 * k)
    phi_e[:, 0] = (-3 * v[:, 0] + 4 * v[:, 1] - v[:, 2]) / (2 * k)
    phi_e[:, -1] = (3 * v[:, -1] - 4 * v[:, -2] + v[:, -3]) / (2 * k)
    u_r = radial_derivative(rg, phi.u)[:, None]
    W = w[:, None]
    eta = cg.eta[None, :]
    dens = (phi.eps**2 * (phi_r - eta * u_r * phi_e / W) ** 2 + (phi_e / W) ** 2) * W
    weta = np.full(cg.m + 1, k)
    weta[[0, -1]] *= 0.5
    return -0.5 * integrate_disc(rg, dens @ weta)


def total_energy(u, phi: PotentialField, p: Params) -> EnergyReport:
    rg = phi.grid.radial
    em, bound = mechanical_energy(rg, u, p)
    ee = electrostatic_energy(phi)
    return EnergyReport(em, ee, em + 2.0 * p.lam * ee, bound)


def energy_at(cg: CylinderGrid, u, p: Params) -> EnergyReport:
    phi = solve_potential(cg, u, p)
    return total_energy(u, phi, p)


def continuum_plate_operator(g: RadialGrid, u, p: Params) -> np.ndarray:
    """beta Lap^2 u - tau Lap u with the high-order stencils."""
    _, _, lap, _ = high_order_operators(g)
    lu = lap @ np.asarray(u, dtype=float)
    return p.beta * (lap @ lu) - p.tau * lu


def _directional_fd(fun, u, v, step):
    return (fun(u + step * v) - fun(u - step * v)) / (2.0 * step)


def _check_direction(v):
    if abs(v[-1]) > 1e-14:
        raise ValueError("variation direction must vanish at r = 1")


def mechanical_variation_formula(g: RadialGrid, u, v, p: Params, boundary: bool = True) -> float:
    """int (A u) v plus, optionally, the rim term 2 pi beta (Lap u - (1-sigma) kappa u_r)(1) v_r(1)."""
    D1, _, lap, w = high_order_operators(g)
    u, v = np.asarray(u, float), np.asarray(v, float)
    val = float(w @ (continuum_plate_operator(g, u, p) * v))
    if boundary:
        moment = (lap @ u)[-1] - (1.0 - p.sigma) * p.kappa * (D1 @ u)[-1]
        val += p.beta * moment * 2.0 * np.pi * (D1 @ v)[-1]
    return val


def variation_test_mech(g: RadialGrid, u, v, p: Params, step: float = 1e-4,
                        boundary: bool = True) -> float:
    """|FD of E_m in direction v - (int A u v + rim moment term)|."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    _check_direction(v)
    if not np.any(v):
        return 0.0
    fd = _directional_fd(lambda w: mechanical_energy(g, w, p)[0], u, v, step)
    return abs(fd - mechanical_variation_formula(g, u, v, p, boundary))


def variation_test_elec(cg: CylinderGrid, u, v, p: Params, step: float = 1e-4) -> float:
    """|FD of E_e in direction v - 1/2 int g(u) v|."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    _check_direction(v)
    if not np.any(v):
        return 0.0
    rg = cg.radial
    fd = _directional_fd(lambda w: electrostatic_energy(solve_potential(cg, w, p)), u, v, step)
    g = trace_force(solve_potential(cg, u, p), p)
    return abs(fd - 0.5 * integrate_disc(rg, g * v))


def total_energy_derivative(cg: CylinderGrid, u, v, p: Params, step: float = 1e-4) -> float:
    """Central difference of E_lam at u in direction v."""
    return _directional_fd(lambda w: energy_at(cg, w, p).e_total, np.asarray(u, float),
                           np.asarray(v, float), step)


def variation_test_total(cg: CylinderGrid, u, v, p: Params, step: float = 1e-4) -> float:
    """|FD of E_lam - (int (A u + lam g) v + rim moment term)|."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    _check_direction(v)
    if not np.any(v):
        return 0.0
    rg = cg.radial
    fd = total_energy_derivative(cg, u, v, p, step)
    g = trace_force(solve_potential(cg, u, p), p)
    formula = mechanical_variation_formula(rg, u, v, p) + p.lam * integrate_disc(rg, g * v)
    return abs(fd - formula)


def smallgap_electrostatic_energy(g: RadialGrid, u) -> float:
    """eps = 0 limit: psi is linear in z, so the gap integral is -1/2 int 1/(1+u)."""
    return -0.5 * integrate_disc(g, 1.0 / (1.0 + np.asarray(u, dtype=float)))


def scheme_mechanical_energy(plate: PlateOperator, u) -> float:
    """1/2 <A_h u, u> in the control-volume inner product.

    This is the quadratic form whose gradient is exactly the discrete plate
    operator, so discrete stationary states are its critical points.  It agrees
    with :func:`mechanical_energy` for fields obeying the hinged conditions up to
    discretisation error.
    """
    u = np.asarray(u, dtype=float)
    return 0.5 * inner(plate.grid, plate.apply(u), u)


def scheme_total_energy(plate: PlateOperator, cg: CylinderGrid, u, p: Params) -> float:
    phi = solve_potential(cg, u, p)
    return scheme_mechanical_energy(plate, u) + 2.0 * p.lam * electrostatic_energy(phi)


def scheme_energy_derivative(plate: PlateOperator, cg: CylinderGrid, u, v, p: Params,
                             step: float = 1e-4) -> float:
    """Central difference of the scheme energy at u in direction v."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    _check_direction(v)
    return _directional_fd(lambda w: scheme_total_energy(plate, cg, w, p), u, v, step)
