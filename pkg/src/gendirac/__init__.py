"""Numerical laboratory for the 20-component first-order form of the
second-order two-mass Dirac equation."""

from .algebra import ModelParameters, build_operators
from .spectral import FourMomentum, mass_spectrum, plane_wave

__version__ = "0.1.0"

__all__ = ["ModelParameters", "build_operators", "FourMomentum", "mass_spectrum", "plane_wave", "__version__"]
