"""Orthonormal wavelet pairs whose filters share a common factor and whose
wavelets approximate a Hilbert transform pair."""
from .bezout import BezoutSolution, Method, solve
from .factorize import FilterBank, PhaseChoice, design_bank, verify_pr
from .spectral import AnalyticityReport, analyze, cascade_spectra, sobolev_exponent
from .thiran import thiran_coeffs

__all__ = [
    "AnalyticityReport",
    "BezoutSolution",
    "FilterBank",
    "Method",
    "PhaseChoice",
    "analyze",
    "cascade_spectra",
    "design_bank",
    "solve",
    "sobolev_exponent",
    "thiran_coeffs",
    "verify_pr",
]
