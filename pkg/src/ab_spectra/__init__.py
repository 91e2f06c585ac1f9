"""Spectral laboratory for the Aharonov-Bohm Hamiltonian outside a disk solenoid."""

from .model import (Circulation, NumericsConfig, PotentialSpec, RadialMesh, build_mesh,
                    canonical_circulation, evaluate_potential, validate_potential)
from .spectrum import (GroundState, SweepResult, degeneracy_multiplicity, fd_derivative,
                       ground_state, hf_derivative, sweep)

__all__ = [
    "Circulation", "NumericsConfig", "PotentialSpec", "RadialMesh", "build_mesh",
    "canonical_circulation", "evaluate_potential", "validate_potential",
    "GroundState", "SweepResult", "degeneracy_multiplicity", "fd_derivative",
    "ground_state", "hf_derivative", "sweep",
]
__version__ = "0.1.0"
