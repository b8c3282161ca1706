"""Benford's law in arbitrary real bases: significands, Fourier coefficients mod 1, Benford spectra."""
from .kernels import BACKEND
from .modmath import Base, log_mantissa, mod_z, scale_mod, significand, power_base_identity_check

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Base", "log_mantissa", "mod_z", "scale_mod", "significand",
    "power_base_identity_check",
]
