"""Electrostatic potential on the deflected gap, solved on the fixed cylinder.

With w = 1 + u(r) and eta = (1 + z) / w the potential psi(r, z) = phi(r, eta)
on D x (0, 1) solves

    eps^2 w^2 (phi_rr + phi_r / r) - 2 eps^2 eta w u_r phi_r,eta
        + (1 + eps^2 eta^2 u_r^2) phi_eta,eta
        + eps^2 eta (2 u_r^2 - w Lap u) phi_eta = 0,

phi = eta on the boundary (phi = 0 at the ground plate, 1 on the plate and
linear on the lateral wall).  Centred differences everywhere, a centred cross
stencil for the mixed derivative, mirror symmetry on the axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded
from scipy.special import j0

from .grid import CylinderGrid, RadialGrid, integrate_disc, radial_derivative, radial_laplacian
from .model import Params


class TouchdownError(RuntimeError):
    """The plate reached the ground plate (min u <= -1)."""


@dataclass
class PotentialField:
    grid: CylinderGrid
    values: np.ndarray  # phi[i, j] at (r_i, eta_j)
    u: np.ndarray
    eps: float

    @property
    def gap(self) -> np.ndarray:
        return 1.0 + self.u

    def psi_coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Physical (r, z) of every grid node."""
        r = self.grid.radial.r[:, None] * np.ones_like(self.values)
        z = self.gap[:, None] * self.grid.eta[None, :] - 1.0
        return r, z

    def to_csv_rows(self):
        r = self.grid.radial.r
        for i in range(r.size):
            for j, e in enumerate(self.grid.eta):
                yield r[i], e, self.values[i, j]


def _plate_coefficients(rg: RadialGrid, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u_r = radial_derivative(rg, u)
    lap = radial_laplacian(rg, u)
    return u_r, lap


def _stencil(cg: CylinderGrid, u: np.ndarray, eps: float, dirichlet: np.ndarray):
    """Interior stencil triples (row, interior column, value) and right-hand side.

    Unknowns are the nodes i = 0..n-1, j = 1..m-1 numbered q = i (m-1) + j - 1.
    """
    rg = cg.radial
    n, m = rg.n, cg.m
    h, k = rg.h, cg.k
    w = 1.0 + u
    u_r, lap = _plate_coefficients(rg, u)
    e2 = eps * eps

    I, J = np.meshgrid(np.arange(n), np.arange(1, m), indexing="ij")
    I, J = I.ravel(), J.ravel()
    eta = cg.eta[J]
    wi, uri, lapi = w[I], u_r[I], lap[I]
    a_rr = e2 * wi**2
    a_re = -2.0 * e2 * eta * wi * uri
    a_ee = 1.0 + e2 * eta**2 * uri**2
    a_e = e2 * eta * (2.0 * uri**2 - wi * lapi)

    M = m + 1
    node = I * M + J
    axis = I == 0
    r = np.where(axis, 1.0, rg.r[I])  # placeholder radius on the axis rows
    c_w = np.where(axis, 0.0, a_rr * (1.0 / h**2 - 1.0 / (2 * h * r)))
    c_e = np.where(axis, 4.0 * a_rr / h**2, a_rr * (1.0 / h**2 + 1.0 / (2 * h * r)))
    c_c = np.where(axis, -4.0 * a_rr / h**2, -2.0 * a_rr / h**2) - 2.0 * a_ee / k**2
    c_n = a_ee / k**2 + a_e / (2 * k)
    c_s = a_ee / k**2 - a_e / (2 * k)
    x = np.where(axis, 0.0, a_re / (4 * h * k))
    im = np.maximum(I - 1, 0)

    cols = np.concatenate([node, (I + 1) * M + J, im * M + J, node + 1, node - 1,
                           (I + 1) * M + J + 1, (I + 1) * M + J - 1, im * M + J + 1, im * M + J - 1])
    vals = np.concatenate([c_c, c_e, c_w, c_n, c_s, x, -x, -x, x])
    rows = np.tile(np.arange(node.size), 9)

    interior = np.full((n + 1) * M, -1)
    interior[node] = np.arange(node.size)
    target = interior[cols]
    inside = (target >= 0) & (vals != 0.0)
    outside = target < 0
    rhs = -np.bincount(rows[outside], weights=vals[outside] * dirichlet.ravel()[cols[outside]],
                       minlength=node.size)
    return rows[inside], target[inside], vals[inside], rhs, node


def _assemble(cg: CylinderGrid, u: np.ndarray, eps: float, dirichlet: np.ndarray):
    rows, cols, vals, rhs, node = _stencil(cg, u, eps, dirichlet)
    A = sp.csc_matrix((vals, (rows, cols)), shape=(node.size, node.size))
    return A, rhs, node


def _solve_banded(cg: CylinderGrid, u: np.ndarray, eps: float, dirichlet: np.ndarray):
    # lexicographic numbering gives half bandwidth m
    rows, cols, vals, rhs, node = _stencil(cg, u, eps, dirichlet)
    bw = cg.m
    ab = np.zeros((2 * bw + 1, node.size))
    np.add.at(ab, (bw + rows - cols, cols), vals)
    return solve_banded((bw, bw), ab, rhs, check_finite=False), node


def standard_dirichlet(cg: CylinderGrid) -> np.ndarray:
    n, m = cg.radial.n, cg.m
    data = np.zeros((n + 1, m + 1))
    data[:, m] = 1.0
    data[n, :] = cg.eta
    return data


def solve_potential(cg: CylinderGrid, u, p: Params, *, check_boundary: bool = True,
                    dirichlet: np.ndarray | None = None) -> PotentialField:
    """Transformed potential for deflection ``u``.

    ``dirichlet`` overrides the boundary data (only its boundary entries are
    read); it is used for manufactured-solution checks.  ``check_boundary=False``
    admits fields with u(1) != 0 (e.g. constant deflections).
    """
    u = np.asarray(u, dtype=float)
    rg = cg.radial
    if u.shape != (rg.n + 1,):
        raise ValueError(f"deflection has shape {u.shape}, expected ({rg.n + 1},)")
    if not np.all(np.isfinite(u)):
        raise ValueError("deflection contains non-finite values")
    if np.min(u) <= -1.0 + 1e-12:
        raise TouchdownError(f"min u = {np.min(u):.6g} <= -1")
    if check_boundary and abs(u[-1]) > 1e-12:
        raise ValueError(f"deflection is not hinged at r=1 (u(1) = {u[-1]:.3g})")
    data = standard_dirichlet(cg) if dirichlet is None else np.asarray(dirichlet, dtype=float)
    x, node = _solve_banded(cg, u, p.eps, data)
    if not np.all(np.isfinite(x)):
        raise np.linalg.LinAlgError("potential solve produced non-finite values")
    phi = data.copy()
    phi.ravel()[node] = x
    return PotentialField(cg, phi, u.copy(), p.eps)


def apply_operator(cg: CylinderGrid, u, eps: float, phi: np.ndarray) -> np.ndarray:
    """Discrete transformed operator applied to a full grid function (interior nodes)."""
    A, rhs, node = _assemble(cg, np.asarray(u, float), eps, np.asarray(phi, float))
    return A @ np.asarray(phi).ravel()[node] - rhs


def _eta_derivative_top(phi: PotentialField) -> np.ndarray:
    v, k = phi.values, phi.grid.k
    return (3.0 * v[:, -1] - 4.0 * v[:, -2] + v[:, -3]) / (2.0 * k)


def vertical_field(phi: PotentialField) -> np.ndarray:
    """d psi / dz on the plate, phi_eta(r, 1) / (1 + u)."""
    return _eta_derivative_top(phi) / phi.gap


def horizontal_field(phi: PotentialField) -> np.ndarray:
    """d psi / dr on the plate by the chain rule phi_r - eta u_r phi_eta / (1 + u) at eta = 1."""
    rg = phi.grid.radial
    phi_r = radial_derivative(rg, phi.values[:, -1])
    u_r = radial_derivative(rg, phi.u)
    return phi_r - u_r * _eta_derivative_top(phi) / phi.gap


def trace_force(phi: PotentialField, p: Params | None = None) -> np.ndarray:
    """g(u) = eps^2 |grad' psi|^2 + (d_z psi)^2 evaluated on the plate."""
    eps = phi.eps if p is None else p.eps
    return eps**2 * horizontal_field(phi) ** 2 + vertical_field(phi) ** 2


def force(cg: CylinderGrid, u, p: Params) -> np.ndarray:
    """Trace force of ``u``; closed form 1/(1+u)^2 when eps = 0."""
    u = np.asarray(u, dtype=float)
    if p.eps == 0.0:
        if np.min(u) <= -1.0 + 1e-12:
            raise TouchdownError(f"min u = {np.min(u):.6g} <= -1")
        return 1.0 / (1.0 + u) ** 2
    return trace_force(solve_potential(cg, u, p), p)


@dataclass
class MaxPrincipleReport:
    sup_psi_minus_M: float
    inf_dz_psi: float


def check_max_principle(phi: PotentialField) -> MaxPrincipleReport:
    """Compare psi with M = 1 + z - u and report the smallest d_z psi on the plate."""
    M = phi.gap[:, None] * phi.grid.eta[None, :] - phi.u[:, None]
    return MaxPrincipleReport(float(np.max(phi.values - M)), float(np.min(vertical_field(phi))))


def boundary_gradient_identity(phi: PotentialField, r_max: float = 1.0) -> float:
    """max |d_r psi(r, u(r)) + u_r d_z psi(r, u(r))| over interior plate nodes with r < r_max.

    Here d_r psi is a horizontal difference of psi at the fixed height z = u(r_i),
    read off the neighbouring columns by quadratic interpolation in eta through
    the three topmost nodes, so it does not reuse the chain-rule formula.
    """
    rg, cg = phi.grid.radial, phi.grid
    v, k, w, u = phi.values, cg.k, phi.gap, phi.u
    i = np.arange(1, rg.n)
    i = i[rg.r[i] < r_max]

    def psi_at(col, eta):
        # Lagrange quadratic on eta_m, eta_{m-1}, eta_{m-2}, in offsets s = (1 - eta)/k
        s = (1.0 - eta) / k
        f0, f1, f2 = v[col, -1], v[col, -2], v[col, -3]
        return f0 * (s - 1) * (s - 2) / 2 - f1 * s * (s - 2) + f2 * s * (s - 1) / 2

    z = u[i]
    plus = psi_at(i + 1, (1.0 + z) / w[i + 1])
    minus = psi_at(i - 1, (1.0 + z) / w[i - 1])
    dr_psi = (plus - minus) / (2.0 * rg.h)
    u_r = radial_derivative(rg, u)[i]
    return float(np.max(np.abs(dr_psi + u_r * vertical_field(phi)[i]))) if i.size else 0.0


def potential_difference_norm(phi1: PotentialField, phi2: PotentialField) -> float:
    """Discrete L2(cylinder) norm of phi1 - phi2 (control volumes x trapezoid in eta)."""
    d2 = (phi1.values - phi2.values) ** 2
    weta = np.full(phi1.grid.m + 1, phi1.grid.k)
    weta[[0, -1]] *= 0.5
    return float(np.sqrt(integrate_disc(phi1.grid.radial, d2 @ weta)))


def manufactured_error(n: int, m: int, eps: float, wavenumber: float = 3.0,
                       amplitude: float = 0.3) -> float:
    """Max nodal error for the exact solution J0(k r) sinh(eps k (1 + z)).

    The deflection is amplitude * (1 - r^2); the exact field supplies the
    boundary data, so only the transformed interior operator is tested.
    """
    if not eps > 0:
        raise ValueError("manufactured check needs eps > 0")
    cg = CylinderGrid(RadialGrid(n), m)
    r = cg.radial.r
    u = amplitude * (1.0 - r**2)
    z = (1.0 + u)[:, None] * cg.eta[None, :] - 1.0
    exact = j0(wavenumber * r)[:, None] * np.sinh(eps * wavenumber * (1.0 + z))
    phi = solve_potential(cg, u, Params(eps=eps), dirichlet=exact)
    return float(np.max(np.abs(phi.values - exact)))


def mms_convergence(eps: float, levels=(32, 64, 128), aspect: float = 1.0):
    """Errors and observed orders log2(e_k / e_{k+1}) under uniform refinement."""
    errs = [manufactured_error(n, max(3, int(round(aspect * n))), eps) for n in levels]
    orders = [float(np.log2(a / b)) for a, b in zip(errs[:-1], errs[1:])]
    return errs, orders
