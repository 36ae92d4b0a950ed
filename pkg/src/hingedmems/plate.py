"""Hinged plate operator A u = beta Lap^2 u - tau Lap u.

Boundary conditions u = Lap u - (1 - sigma) kappa u_r = 0 at r = 1.  The fourth
order problem is split as v = -Lap u, -beta Lap v + tau v = f and assembled as
one coupled sparse system in (u, v).  The rim value v_n is tied to the slope
through a ghost node u_{n+1}: imposing the hinged condition with centred
differences at r = 1 and eliminating the ghost leaves the two-point relation

    v_n = -(1 - sigma) kappa * (u_n - u_{n-1}) / (h (1 + h c / 2)),
    c   = 1 - (1 - sigma) kappa,

which is second order and keeps the discrete operator symmetric in the
control-volume inner product of :mod:`hingedmems.grid`.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .grid import RadialGrid, boundary_laplacian, boundary_normal_derivative, radial_laplacian
from .model import Params


def laplacian_matrix(g: RadialGrid) -> sp.csr_matrix:
    """(n, n+1) matrix of the radial Laplacian rows at nodes 0..n-1."""
    n, h = g.n, g.h
    rows, cols, vals = [0, 0], [0, 1], [-4.0 / h**2, 4.0 / h**2]
    i = np.arange(1, n)
    r = g.r[i]
    rows += list(np.repeat(i, 3))
    cols += list(np.column_stack([i - 1, i, i + 1]).ravel())
    vals += list(np.column_stack([1.0 / h**2 - 1.0 / (2 * h * r),
                                  np.full_like(r, -2.0 / h**2),
                                  1.0 / h**2 + 1.0 / (2 * h * r)]).ravel())
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n + 1))


class PlateOperator:
    """Assembled hinged plate operator, optionally shifted: (A + diag(s)) u = f.

    ``shift`` may be a scalar or a node vector (only entries 0..n-1 are used);
    the evolution step uses a scalar 1/dt, Newton for the small gap model a
    vector reaction term.
    """

    def __init__(self, p: Params, g: RadialGrid, shift=0.0):
        self.params = p
        self.grid = g
        n = g.n
        s = np.broadcast_to(np.asarray(shift, dtype=float), (n + 1,))[:n] if np.ndim(shift) else np.full(n, float(shift))
        self.shift = s
        lap = laplacian_matrix(g)
        self._lap = lap
        # rim relation v_n = slope_coef * u_{n-1}  (u_n = 0)
        self.slope_coef = (1.0 - p.sigma) * p.kappa / (g.h * (1.0 + 0.5 * g.h * self._c))
        N = n + 1
        I = sp.identity(N, format="csr")
        # rows 0..n-1: Lap u + v = 0 ; row n: u_n = 0
        top_u = sp.vstack([lap, sp.csr_matrix(([1.0], ([0], [n])), shape=(1, N))])
        top_v = sp.vstack([sp.identity(N, format="csr")[:n], sp.csr_matrix((1, N))])
        # rows n+1..2n: -beta Lap v + tau v + s u = f ; row 2n+1: v_n - slope_coef u_{n-1} = 0
        bot_u = sp.vstack([sp.hstack([sp.diags(s), sp.csr_matrix((n, 1))]),
                           sp.csr_matrix(([-self.slope_coef], ([0], [n - 1])), shape=(1, N))])
        bot_v = sp.vstack([-p.beta * lap + p.tau * I[:n], sp.csr_matrix(([1.0], ([0], [n])), shape=(1, N))])
        self.system = sp.bmat([[top_u, top_v], [bot_u, bot_v]], format="csc")
        self._lu = splu(self.system)
        self._norm = float(abs(self.system).sum(axis=1).max())

    @property
    def _c(self) -> float:
        return 1.0 - (1.0 - self.params.sigma) * self.params.kappa

    def solve(self, f) -> np.ndarray:
        """Deflection u (n+1 node values, u_n = 0) with A u = f at nodes 0..n-1."""
        n = self.grid.n
        f = np.asarray(f, dtype=float)
        if f.shape not in ((n,), (n + 1,)):
            raise ValueError(f"load has shape {f.shape}, expected ({n},) or ({n + 1},)")
        rhs = np.zeros(2 * n + 2)
        rhs[n + 1:2 * n + 1] = f[:n]
        x = self._lu.solve(rhs)
        res = np.max(np.abs(self.system @ x - rhs))
        scale = self._norm * np.max(np.abs(x)) + np.max(np.abs(rhs))
        if not np.all(np.isfinite(x)) or res > 1e-10 * max(scale, 1e-300):
            raise np.linalg.LinAlgError(f"plate solve residual {res:.3e} too large")
        u = x[:n + 1].copy()
        u[n] = 0.0
        return u

    def rim_moment(self, u) -> float:
        """v_n = -Lap u(1) as prescribed by the hinged condition."""
        u = np.asarray(u, dtype=float)
        return self.slope_coef * (u[-2] - u[-1])

    def laplacian(self, u) -> np.ndarray:
        """Lap u at all nodes; the rim value comes from the hinged condition."""
        out = radial_laplacian(self.grid, u)
        out[-1] = -self.rim_moment(u)
        return out

    @property
    def matrix(self) -> sp.csr_matrix:
        """(n, n) matrix of A + diag(shift) acting on u_0..u_{n-1} (u_n = 0)."""
        p, n = self.params, self.grid.n
        lap = self._lap
        lap_d = lap[:, :n]
        P = sp.vstack([-lap_d, sp.csr_matrix(([self.slope_coef], ([0], [n - 1])), shape=(1, n))])
        return (-p.beta * (lap @ P) - p.tau * lap_d + sp.diags(self.shift)).tocsr()

    def apply(self, u) -> np.ndarray:
        """A u at nodes 0..n-1 (rim entry returned as 0) for u with u_n = 0."""
        u = np.asarray(u, dtype=float)
        n = self.grid.n
        if u.shape != (n + 1,):
            raise ValueError(f"field has shape {u.shape}, expected ({n + 1},)")
        v = -self.laplacian(u)
        p = self.params
        out = np.zeros(n + 1)
        out[:n] = -p.beta * (self._lap @ v) + p.tau * v[:n] + self.shift * u[:n]
        return out


def check_hinged_bc(g: RadialGrid, u, p: Params) -> tuple[float, float]:
    """(|u(1)|, |Lap u(1) - (1-sigma) kappa u'(1)|) with one-sided stencils."""
    u = np.asarray(u, dtype=float)
    steklov = boundary_laplacian(g, u) - (1.0 - p.sigma) * p.kappa * boundary_normal_derivative(g, u)
    return abs(float(u[-1])), abs(float(steklov))
