"""Numerical solver and verification harness for the 2+1-dimensional
equivariant Faddeev field equation.

The quasilinear angle equation is lifted (u = r v + phi) to a 4+1 radial
wave equation for v, evolved by RK4 method-of-lines, while the auxiliary
integral field Phi and the model's conserved quantities, decay rates, and
inequality suites are maintained as live, quantitative cross-checks.
"""

from .fields import ModelParams, PhiState, UState, VState
from .grid import RadialGrid, make_grid, radial_derivative, radial_integral
from .cutoffs import CutoffProfile, build_cutoffs
from .model import (EnergyBreakdown, a_tilde, build_phi, energy, nonlinearity_u,
                    phi_second_time_derivative, recover_grad_v, rhs_phi, rhs_v,
                    topological_charge, u_from_v, v_from_u)
from .solver import SolverConfig, TrajectoryRecord, acceleration_v, evolve, step
from .spectral import NormSpec, SpectralField, hankel_forward, hankel_inverse, sobolev_norm
from .analysis import (DiagnosticsReport, comparison_I, decay_monitors,
                       inequality_suite_hardy, inequality_suite_radial_sobolev,
                       validate_initial_data)
from .profiles import initial_data_registry

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "UState", "VState", "PhiState", "RadialGrid", "CutoffProfile",
    "make_grid", "build_cutoffs", "radial_derivative", "radial_integral",
    "EnergyBreakdown", "a_tilde", "build_phi", "energy", "nonlinearity_u",
    "phi_second_time_derivative", "recover_grad_v", "rhs_phi", "rhs_v",
    "topological_charge", "u_from_v", "v_from_u",
    "SolverConfig", "TrajectoryRecord", "acceleration_v", "evolve", "step",
    "NormSpec", "SpectralField", "hankel_forward", "hankel_inverse", "sobolev_norm",
    "DiagnosticsReport", "comparison_I", "decay_monitors",
    "inequality_suite_hardy", "inequality_suite_radial_sobolev",
    "validate_initial_data", "initial_data_registry",
    "__version__",
]
