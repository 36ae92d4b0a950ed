"""Dimensionless model parameters and the dimensional -> dimensionless map."""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Params:
    """Dimensionless constants of the hinged-plate MEMS model.

    ``lam`` is the voltage parameter (``lambda`` in config files); ``eps = 0``
    selects the small gap model.
    """

    beta: float = 1.0
    tau: float = 0.0
    sigma: float = 0.0
    eps: float = 0.1
    lam: float = 0.0
    kappa: float = 1.0

    def with_(self, **changes) -> "Params":
        return replace(self, **changes)


@dataclass(frozen=True)
class DimensionalInputs:
    B: float  # flexural rigidity
    T: float  # stress coefficient
    V: float  # applied voltage
    H: float  # gap height
    L: float  # characteristic length
    eps0: float = 8.8541878128e-12


def validate(p: Params) -> list[str]:
    """Return the violated range constraints of ``p`` (empty when valid)."""
    out = []
    if not p.beta > 0:
        out.append("beta <= 0")
    if not p.tau >= 0:
        out.append("tau < 0")
    if not -1 < p.sigma < 1:
        out.append("sigma not in (-1,1)")
    if not p.eps >= 0:
        out.append("eps < 0")
    if not p.lam >= 0:
        out.append("lambda < 0")
    if not p.kappa >= 0:
        out.append("kappa < 0")
    return out


def nondimensionalize(d: DimensionalInputs, sigma: float, kappa: float = 1.0) -> Params:
    """Convert device data to dimensionless parameters.

    eps = H/L, lambda = eps0 V^2 L / (2 eps^3), beta = B and tau = T L^2.
    The stretching coefficient is read as ``T`` (the source notation for the
    scaled tension uses an otherwise undefined symbol).
    """
    for name in ("B", "V", "H", "L", "eps0"):
        if not getattr(d, name) > 0:
            raise ValueError(f"{name} must be positive, got {getattr(d, name)!r}")
    if not d.T >= 0:
        raise ValueError(f"T must be nonnegative, got {d.T!r}")
    if not -1 < sigma < 1:
        raise ValueError(f"sigma must lie in (-1,1), got {sigma!r}")
    eps = d.H / d.L
    lam = d.eps0 * d.V**2 * d.L / (2.0 * eps**3)
    return Params(beta=d.B, tau=d.T * d.L**2, sigma=sigma, eps=eps, lam=lam, kappa=kappa)
