"""Exact spectrum of the two-site Bose-Hubbard (special LMG) model.

The eigenstates are labelled by extended Heine-Stieltjes polynomials whose
zeros solve the Bethe equations. The package builds these polynomials from
a Van Vleck eigenproblem, extracts their zeros, and checks the result
against sum rules, electrostatic equilibria and exact Fock-space
diagonalisation.
"""
__version__ = "0.1.0"

from .errors import LMGError
from .kernels import BACKEND
from .model import PhysicalParams, SpectralParams, Sector, to_spectral, sectors_of, energy_from_roots
from .spectrum import solve_spectrum

__all__ = ["LMGError", "BACKEND", "PhysicalParams", "SpectralParams", "Sector", "to_spectral",
           "sectors_of", "energy_from_roots", "solve_spectrum"]
