"""Correlation structure and excitation spectrum of the two-mode Dicke model.

Thermodynamic-limit pipeline (classical ground state -> quadratic
fluctuations -> Williamson diagonalization -> ground-state covariance matrix
-> Gaussian correlation measures), a finite-size exact-diagonalization oracle
for validation, and a sweep CLI.
"""

from .errors import (
    BudgetExceededError,
    ConfigError,
    GoldstoneLineError,
    NearSingularError,
    NonPhysicalError,
    NonPositiveDefiniteError,
    NonSymmetricError,
    NotPureError,
    NotThreeModeError,
    NumericalFailureError,
    PatternFailureError,
    TwoModeDickeError,
    UnknownModeError,
)
from .gaussian_info import (
    CorrelationReport,
    CovarianceMatrix,
    correlation_report,
    eof_pure_bipartition,
    eof_two_of_three,
    mutual_information,
    reduce,
    renyi2_entropy,
    tripartite_residual,
)
from .model import (
    ClassicalGroundState,
    ExcitationSpectrum,
    ModelParams,
    Phase,
    classical_ground_state,
    excitation_gaps,
    fluctuation_matrix,
    ground_state_cm,
    ground_state_energy,
    gs_energy_derivative_scan,
)
from .oracle import FiniteSizeResult, TruncationSpec, exact_ground_state
from .symplectic import (
    StandardFormCM,
    WilliamsonDecomposition,
    standard_form,
    symplectic_eigenvalues,
    symplectic_form,
    williamson,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ClassicalGroundState",
    "ConfigError",
    "CorrelationReport",
    "CovarianceMatrix",
    "ExcitationSpectrum",
    "FiniteSizeResult",
    "GoldstoneLineError",
    "ModelParams",
    "NearSingularError",
    "NonPhysicalError",
    "NonPositiveDefiniteError",
    "NonSymmetricError",
    "NotPureError",
    "NotThreeModeError",
    "NumericalFailureError",
    "PatternFailureError",
    "Phase",
    "StandardFormCM",
    "TruncationSpec",
    "TwoModeDickeError",
    "UnknownModeError",
    "WilliamsonDecomposition",
    "classical_ground_state",
    "correlation_report",
    "eof_pure_bipartition",
    "eof_two_of_three",
    "exact_ground_state",
    "excitation_gaps",
    "fluctuation_matrix",
    "ground_state_cm",
    "ground_state_energy",
    "gs_energy_derivative_scan",
    "mutual_information",
    "reduce",
    "renyi2_entropy",
    "standard_form",
    "symplectic_eigenvalues",
    "symplectic_form",
    "tripartite_residual",
    "williamson",
]
