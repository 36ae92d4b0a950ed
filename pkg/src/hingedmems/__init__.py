"""Hinged elastic plate with free-boundary electrostatics (MEMS pull-in model)."""
from .model import DimensionalInputs, Params, nondimensionalize, validate
from .grid import CylinderGrid, RadialGrid
from .plate import PlateOperator
from .potential import PotentialField, TouchdownError, force, solve_potential
from .energy import EnergyReport, energy_at
from .stationary import (ContinuationTrace, MembershipReport, Problem, SolveReport,
                         continue_in_lambda, membership, picard_step, solve_stationary)
from .smallgap import SmallGapProblem, smallgap_fold, smallgap_rhs, solve_smallgap
from .spectrum import (EigenPair, StabilityReport, linearized_spectral_bound,
                       nonexistence_certificate, principal_eigenpair)
from .evolution import EvolutionTrace, evolve, step

__version__ = "0.1.0"

__all__ = [
    "Params", "DimensionalInputs", "nondimensionalize", "validate",
    "RadialGrid", "CylinderGrid", "PlateOperator",
    "PotentialField", "TouchdownError", "force", "solve_potential",
    "EnergyReport", "energy_at",
    "Problem", "SolveReport", "MembershipReport", "ContinuationTrace",
    "picard_step", "solve_stationary", "membership", "continue_in_lambda",
    "SmallGapProblem", "smallgap_rhs", "solve_smallgap", "smallgap_fold",
    "EigenPair", "StabilityReport", "principal_eigenpair", "linearized_spectral_bound",
    "nonexistence_certificate",
    "EvolutionTrace", "evolve", "step",
]
