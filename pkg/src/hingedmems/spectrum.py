"""Principal eigenpair of the hinged plate operator and linearized stability."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvals

from .grid import RadialGrid, boundary_normal_derivative, inner, integrate_disc
from .model import Params
from .plate import PlateOperator
from .stationary import Problem


@dataclass
class EigenPair:
    mu1: float
    phi1: np.ndarray
    residual: float
    iterations: int = 0
    converged: bool = True

    def boundary_slope(self, g: RadialGrid) -> float:
        return float(boundary_normal_derivative(g, self.phi1))


def _inverse_power(plate: PlateOperator, g: RadialGrid, tol: float, max_iter: int, deflate=None):
    w = 1.0 - g.r**2
    w[-1] = 0.0
    if deflate is not None:
        w = w * np.cos(3.0 * g.r)
    mu, it, converged = np.nan, 0, False
    for it in range(1, max_iter + 1):
        if deflate is not None:
            w = w - inner(g, w, deflate) / inner(g, deflate, deflate) * deflate
        z = plate.solve(w)
        # Rayleigh quotient <A z, z>/<z, z> with A z = w
        new = inner(g, w, z) / inner(g, z, z)
        w = z / np.max(np.abs(z))
        if abs(new - mu) <= tol * abs(new):
            mu, converged = new, True
            break
        mu = new
    if deflate is None and w[np.argmax(np.abs(w))] < 0:
        w = -w
    return float(mu), w, it, converged


def principal_eigenpair(p: Params, g: RadialGrid, tol: float = 1e-12, max_iter: int = 500) -> EigenPair:
    """Smallest eigenvalue of beta Lap^2 - tau Lap with hinged conditions, by inverse iteration.

    phi1 is scaled to max 1; the residual is |A phi1 - mu1 phi1|_inf over the
    interior nodes.
    """
    plate = PlateOperator(p, g)
    mu, phi, it, ok = _inverse_power(plate, g, tol, max_iter)
    phi = phi / np.max(phi)
    res = float(np.max(np.abs((plate.apply(phi) - mu * phi)[:-1])))
    return EigenPair(mu, phi, res, it, ok)


def second_eigenvalue(p: Params, g: RadialGrid, pair: EigenPair | None = None,
                      tol: float = 1e-12, max_iter: int = 2000) -> float:
    """Next radial eigenvalue by inverse iteration orthogonal to phi1 (simplicity probe)."""
    pair = principal_eigenpair(p, g) if pair is None else pair
    plate = PlateOperator(p, g)
    mu, *_ = _inverse_power(plate, g, tol, max_iter, deflate=pair.phi1)
    return mu


@dataclass
class StabilityReport:
    lam: float
    min_real_part: float
    stable: bool


def linearization_matrix(prob: Problem, U) -> np.ndarray:
    """Dense A + lambda Dg(U) on nodes 0..n-1."""
    A = prob.plate.matrix.toarray()
    lam = prob.params.lam
    if lam == 0.0:
        return A
    return A + lam * prob.force_jacobian(U)


def linearized_spectral_bound(prob: Problem, U) -> StabilityReport:
    ev = eigvals(linearization_matrix(prob, U), check_finite=True)
    m = float(np.min(ev.real))
    return StabilityReport(prob.params.lam, m, m > 0.0)


@dataclass
class CertificateReport:
    """lam int phi <= int (-A U) phi = -mu1 int phi U < mu1 int phi."""
    lam_int_phi: float
    minus_AU_phi: float
    minus_mu1_phi_U: float
    mu1_int_phi: float
    holds: bool


def nonexistence_certificate(prob: Problem, mu1: float, phi1, U, slack: float = 1e-6) -> CertificateReport:
    g = prob.radial
    phi1 = np.asarray(phi1, dtype=float)
    U = np.asarray(U, dtype=float)
    lam = prob.params.lam
    a = lam * integrate_disc(g, phi1)
    b = -inner(g, prob.plate.apply(U), phi1)
    c = -mu1 * inner(g, phi1, U)
    d = mu1 * integrate_disc(g, phi1)
    scale = max(abs(d), 1e-300)
    ok = (a <= b + slack * scale and abs(b - c) <= slack * scale
          and (c < d or (lam == 0.0 and c <= d)))
    return CertificateReport(float(a), float(b), float(c), float(d), bool(ok))
