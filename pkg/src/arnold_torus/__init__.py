"""Spectral search for contractible periodic orbits of Hamiltonians on T^2n.

Loops are truncated Fourier series; orbits are critical points of the
symplectic action; the count is certified against the cup-length of the
torus.
"""

__version__ = "0.1.0"

from .loops import FourierLoop, SpectralDecomposition, h12_inner, h12_norm, project
from .hamiltonian import HamiltonianSpec, HomotopyFamily, Term, from_catalog
from .action import action_value, gradient, residual
from .dynamics import CriticalOrbit, OrbitSet, find_all, find_orbit, homotopy_track, verify_orbit
from .bounds import AprioriBound, OmegaSpec, apriori_radius
from .topology import GradedModule, GradedRing, cup_length, exterior_algebra
from .config import SolverConfig

__all__ = [
    "FourierLoop", "SpectralDecomposition", "h12_inner", "h12_norm", "project",
    "HamiltonianSpec", "HomotopyFamily", "Term", "from_catalog",
    "action_value", "gradient", "residual",
    "CriticalOrbit", "OrbitSet", "find_all", "find_orbit", "homotopy_track", "verify_orbit",
    "AprioriBound", "OmegaSpec", "apriori_radius",
    "GradedModule", "GradedRing", "cup_length", "exterior_algebra",
    "SolverConfig",
]
