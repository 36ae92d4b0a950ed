"""Radial grid on the unit disc, the (r, eta) cylinder grid, stencils and quadrature.

All fields are radially symmetric and stored as node values ``u[i] = u(r_i)``
with ``r_i = i h``, ``i = 0..n``.  The origin uses the mirror condition
``u[-1] = u[1]``; the rim ``r = 1`` uses one-sided three/four point stencils.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np


@dataclass(frozen=True)
class RadialGrid:
    n: int
    r: np.ndarray = field(init=False, repr=False, compare=False)
    area: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 radial intervals, got {self.n}")
        n, h = self.n, 1.0 / self.n
        r = np.arange(n + 1) * h
        # control-volume areas: disc of radius h/2 at the centre, annuli
        # [r_i - h/2, r_i + h/2] inside, half annulus at the rim; they sum to pi
        area = 2.0 * np.pi * r * h
        area[0] = np.pi * h**2 / 4.0
        area[-1] = np.pi * (h - h**2 / 4.0)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "area", area)

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def size(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class CylinderGrid:
    """Tensor grid of the fixed cylinder D x (0,1) in (r, eta)."""

    radial: RadialGrid
    m: int
    eta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"need at least 3 vertical intervals, got {self.m}")
        object.__setattr__(self, "eta", np.linspace(0.0, 1.0, self.m + 1))

    @property
    def k(self) -> float:
        return 1.0 / self.m

    @property
    def shape(self) -> tuple[int, int]:
        return self.radial.n + 1, self.m + 1


def _check(g: RadialGrid, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n + 1,):
        raise ValueError(f"expected {g.n + 1} node values, got shape {u.shape}")
    return u


def radial_laplacian(g: RadialGrid, u) -> np.ndarray:
    """u'' + u'/r at nodes 0..n-1; entry n is NaN (rim rows belong to callers)."""
    u = _check(g, u)
    h = g.h
    out = np.full_like(u, np.nan)
    out[0] = 4.0 * (u[1] - u[0]) / h**2
    r = g.r[1:-1]
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2 + (u[2:] - u[:-2]) / (2.0 * h * r)
    return out


def boundary_normal_derivative(g: RadialGrid, u) -> float:
    """Second-order one-sided u'(1)."""
    u = _check(g, u)
    return (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * g.h)


def boundary_second_derivative(g: RadialGrid, u) -> float:
    """Second-order one-sided u''(1)."""
    u = _check(g, u)
    return (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / g.h**2


def boundary_laplacian(g: RadialGrid, u) -> float:
    """One-sided Laplacian u''(1) + u'(1) at the rim."""
    return boundary_second_derivative(g, u) + boundary_normal_derivative(g, u)


def radial_derivative(g: RadialGrid, u) -> np.ndarray:
    """u' at every node: 0 at the centre, centred inside, one-sided at the rim."""
    u = _check(g, u)
    out = np.empty_like(u)
    out[0] = 0.0
    out[1:-1] = (u[2:] - u[:-2]) / (2.0 * g.h)
    out[-1] = boundary_normal_derivative(g, u)
    return out


def second_radial_derivative(g: RadialGrid, u) -> np.ndarray:
    """u'' at every node (mirror at the centre, one-sided at the rim)."""
    u = _check(g, u)
    h = g.h
    out = np.empty_like(u)
    out[0] = 2.0 * (u[1] - u[0]) / h**2
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2
    out[-1] = boundary_second_derivative(g, u)
    return out


def laplacian_all(g: RadialGrid, u) -> np.ndarray:
    """radial_laplacian with the rim entry filled by the one-sided stencil."""
    out = radial_laplacian(g, u)
    out[-1] = boundary_laplacian(g, u)
    return out


def integrate_disc(g: RadialGrid, f) -> float:
    """Integral over the unit disc of a radial node function."""
    return float(np.dot(g.area, _check(g, f)))


def inner(g: RadialGrid, a, b) -> float:
    return integrate_disc(g, np.asarray(a) * np.asarray(b))


def l2_norm(g: RadialGrid, u) -> float:
    return float(np.sqrt(inner(g, u, u)))


# ---- high-order radial calculus (energy diagnostics) ----------------------
# Seven-point stencils, shifted inward near the rim and mirrored through the
# axis, are exact for polynomials of degree <= 6; the quadrature adds end
# corrections to the trapezoid rule on four nodes per end (exact to degree 7).

def fd_weights(offsets, order: int) -> np.ndarray:
    """w with sum_j w_j f(x + s_j h) = h^order f^(order)(x) for polynomials of degree < len(s)."""
    s = np.asarray(offsets, dtype=float)
    V = np.vander(s, len(s), increasing=True).T
    rhs = np.zeros(len(s))
    rhs[order] = factorial(order)
    return np.linalg.solve(V, rhs)


@lru_cache(maxsize=32)
def _high_order(n: int, width: int = 7, ends: int = 4):
    if n + 1 < width:
        raise ValueError(f"need at least {width - 1} intervals for high-order stencils")
    h = 1.0 / n
    N = n + 1
    D1, D2 = np.zeros((N, N)), np.zeros((N, N))
    half = width // 2
    for i in range(N):
        lo = min(i - half, N - width)
        offs = np.arange(lo, lo + width)
        for D, order in ((D1, 1), (D2, 2)):
            for o, wj in zip(offs, fd_weights(offs - i, order)):
                D[i, abs(o)] += wj / h**order
    x = np.linspace(0.0, 1.0, N)
    w = np.full(N, h)
    w[[0, -1]] = 0.5 * h
    idx = list(range(ends)) + list(range(N - ends, N))
    P = np.array([[x[i] ** p for i in idx] for p in range(2 * ends)])
    rhs = np.array([1.0 / (p + 1) - w @ x**p for p in range(2 * ends)])
    w[idx] += np.linalg.solve(P, rhs)
    lap = D2.copy()
    lap[1:] += D1[1:] / x[1:, None]
    lap[0] = 2.0 * D2[0]
    for a in (D1, D2, lap):
        a.flags.writeable = False
    area = 2.0 * np.pi * w * x
    area.flags.writeable = False
    return D1, D2, lap, area


def high_order_operators(g: RadialGrid):
    """(D1, D2, Laplacian, disc weights) with sixth-order accuracy on smooth even fields."""
    return _high_order(g.n)
