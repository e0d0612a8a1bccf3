"""Perron-like matrix spectral toolkit.

Principal eigenvalue, cyclic order and generalized eigenspace of real
matrices whose rightmost eigenvalue is real, via a normalized
truncated-exponential iteration.
"""
__version__ = "0.1.0"

from ._backend import name as backend_name
from .cyclic import CyclicOrderReport, beta, detect_cyclic_order, psi_bar, select_dominant_column
from .eigenspace import EigenspaceBasis, compute_basis, subspace_gap
from .errors import *  # noqa: F401,F403
from .iteration import SpectralEstimate, k_step, run_iteration
from .matio import load_fixture, parse_matrix, write_matrix_market
from .oracle import OracleReport, oracle_report
from .refine import RefinementResult, combined_method, gradient_flow, phi, phi_prime

__all__ = [
    "CyclicOrderReport",
    "EigenspaceBasis",
    "OracleReport",
    "RefinementResult",
    "SpectralEstimate",
    "backend_name",
    "beta",
    "combined_method",
    "compute_basis",
    "detect_cyclic_order",
    "gradient_flow",
    "k_step",
    "load_fixture",
    "oracle_report",
    "parse_matrix",
    "phi",
    "phi_prime",
    "psi_bar",
    "run_iteration",
    "select_dominant_column",
    "subspace_gap",
    "write_matrix_market",
]
