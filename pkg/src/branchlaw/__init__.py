"""Exact and numerical machinery for the branching law of the minimal representation
of SU(n,m) restricted to SO(n,m)."""

from .exact_core import pochhammer, rational_from_str, rational_to_str
from .hahn import HahnParams, SpectralValue, alpha, alpha_sq, hahn_params, hahn_S, stilde, stilde_alpha
from .plancherel import PlancherelMeasure, SpectralFunction, atoms, density, log_gamma, multiplication_symbol
from .radial_ops import apply_L1, jacobi_coeffs, verify_recurrence
from .spectral_transform import CoefficientVector, branching_summary, operator_matrix, transform
from .sympoly import EvenSymPoly, build_psi, psi_norm_sq

__version__ = "0.1.0"
