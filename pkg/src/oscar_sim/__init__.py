"""Quantum dynamics of a single-spin magnetic-resonance-force-microscopy
measurement: spin (x) cantilever (x) readout field.

The package solves the damped dispersive model two independent ways -- an
exact Gaussian characteristic-function solution (`gaussian_dynamics`,
`phase`) and a brute-force truncated-Fock-space master-equation integrator
(`oracle`) -- and ships a CLI (`oscar-sim`) for parameter conversion, phase
distributions, benchmark presets, sweeps, and cross-validation runs.
"""

from .errors import (AdiabaticityWarning, ConfigError, DimensionError,
                     IntegrationError, LeakageError, OscarSimError, PoleError,
                     TruncationError, ValidityWarning)
from .gaussian_dynamics import (ClosedFormTerms, CoeffKey, GaussianCoeffs,
                                closed_form_terms, evolve_closed_form,
                                evolve_ode, initial_coeffs, theta_at_origin,
                                theta_matrix)
from .model import (BranchFrequency, ConditionReport, DimensionlessParams,
                    PhysicalParams, branch_frequency, check_conditions,
                    compute_chi, eta_for_splitting, to_dimensionless)
from .oracle import (ComparisonReport, DensityTrajectory, DiscrepancyReport,
                     Liouvillian, TruncatedSpace, build_generator,
                     compare_with_gaussian, initial_density, integrate,
                     matched_eta_sequence, phase_from_density,
                     validate_adiabatic)
from .phase import (PeakSet, PhaseDistribution, SystemState,
                    distinguishability, find_peaks, phase_distribution)

__version__ = "0.1.0"

__all__ = [
    "AdiabaticityWarning", "BranchFrequency", "ClosedFormTerms", "CoeffKey",
    "ComparisonReport", "ConditionReport", "ConfigError", "DensityTrajectory",
    "DimensionError", "DimensionlessParams", "DiscrepancyReport",
    "GaussianCoeffs", "IntegrationError", "LeakageError", "Liouvillian",
    "OscarSimError", "PeakSet", "PhaseDistribution", "PhysicalParams",
    "PoleError", "SystemState", "TruncatedSpace", "TruncationError",
    "ValidityWarning", "branch_frequency", "build_generator",
    "check_conditions", "closed_form_terms", "compare_with_gaussian",
    "compute_chi", "distinguishability", "eta_for_splitting",
    "evolve_closed_form", "evolve_ode", "find_peaks", "initial_coeffs",
    "initial_density", "integrate", "matched_eta_sequence",
    "phase_distribution", "phase_from_density", "theta_at_origin",
    "theta_matrix", "to_dimensionless", "validate_adiabatic",
]
