"""Ising chain in a quadratic transverse field ``f_j = g j^2 + delta``.

Free-fermion (Majorana) spectra, interface zero modes, real-space magnetization
and susceptibility, local density of states, and many-body thermal quenches.
"""

from .majorana import SpectralData, build_h_m, check_chiral_pairing, diagonalize, ground_energy, spectrum
from .model import ChainParams, DisorderSpec, FieldProfile, build_profile, interface_sites, params_from_scaled
from .zeromodes import analytic_modes, gaussian_fit, pair_fidelity, splitting_sweep

__version__ = "0.1.0"

__all__ = [
    "ChainParams",
    "DisorderSpec",
    "FieldProfile",
    "SpectralData",
    "analytic_modes",
    "build_h_m",
    "build_profile",
    "check_chiral_pairing",
    "diagonalize",
    "gaussian_fit",
    "ground_energy",
    "interface_sites",
    "pair_fidelity",
    "params_from_scaled",
    "spectrum",
    "splitting_sweep",
    "__version__",
]
