"""Numerics for the quantum cohomology of standard flips and their local models.

Extremal quantum rings and spectra, Gamma-class calculus, J/I-function
central charges, Meijer G-functions with their asymptotics, and the
cohomological Fourier-Mukai transform between the two sides of the flip.
"""
from .errors import ConfigError, FlipQCError, NumericalError, PrecisionWarning, SectorWarning
from .geometry import BaseSpec, GeometryConfig, build_classical_ring, build_quantum_ring, sample_equivariant_params
from .spectrum import char_poly_block_check, computed_spectrum, eigenvalue_lambda, theoretical_spectrum
from .meijer import MeijerParams, ScaledComplex, meijer_contour_eval, meijer_eval, meijer_series_eval
from .jfunctions import central_charge, i_tprime_eval, kappa_eval, modified_j_eval
from .fm import fm_coefficients, tame_equivalence_check, u_transform
from .asymptotics import BasisClass, asymptotic_class_check, central_charge_meijer, tame_equivalence_report

__version__ = "0.1.0"

__all__ = [
    "BaseSpec", "BasisClass", "ConfigError", "FlipQCError", "GeometryConfig", "MeijerParams", "NumericalError",
    "PrecisionWarning", "ScaledComplex", "SectorWarning", "asymptotic_class_check", "build_classical_ring",
    "build_quantum_ring", "central_charge", "central_charge_meijer", "char_poly_block_check",
    "computed_spectrum", "eigenvalue_lambda", "fm_coefficients", "i_tprime_eval", "kappa_eval",
    "meijer_contour_eval", "meijer_eval", "meijer_series_eval", "modified_j_eval", "sample_equivariant_params",
    "tame_equivalence_check", "tame_equivalence_report", "theoretical_spectrum", "u_transform",
]
