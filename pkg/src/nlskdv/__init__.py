"""Numerical laboratory for the coupled Schrodinger-KdV system on half-lines.

The package integrates the coupled initial-boundary value problems on the
truncated right and left half-lines, evaluates the explicit linear boundary
operators, tracks the mass/moment/energy functionals with their boundary
fluxes, and checks the long-time growth bounds as quantitative residuals.
"""

from .airy import airy_kernel, airy_kernel_d2, airy_standard
from .boundary_ops import (
    BoundaryProfile,
    cross_validate_linear,
    eval_L,
    eval_V,
    poly_exp_profile,
    table_profile,
    zero_profile,
)
from .diagnostics import (
    BoundaryTraces,
    FunctionalRecord,
    LawResiduals,
    TimeSeries,
    energy_E,
    extract_traces,
    fluxes,
    initial_virial_data,
    law_residuals,
    mass,
    moment_Q,
    p_functional,
    virial_eta_terms,
)
from .errors import BlowUpError, ConfigError, OutOfRangeError, QuadratureConvergenceError
from .grid import (
    BoundarySignals,
    CouplingParams,
    Direction,
    FieldSpec,
    FieldState,
    HalfLineGrid,
    SignalSpec,
    build_grid,
    init_state,
    weighted_norm_sq,
)
from .linprop import (
    KdvPropagator,
    SchrodingerPropagator,
    free_airy_reference,
    free_schrodinger_reference,
)
from .scenarios import (
    TheoremVerdict,
    convergence_study,
    scenario_config,
    scenario_global_right,
    scenario_growth_left,
)
from .stepper import RunResult, SimConfig, Sources, nonlinear_substep, run, strang_step

__version__ = "0.1.0"

__all__ = [
    "BlowUpError", "BoundaryProfile", "BoundarySignals", "BoundaryTraces",
    "ConfigError", "CouplingParams", "Direction", "FieldSpec", "FieldState",
    "FunctionalRecord", "HalfLineGrid", "KdvPropagator", "LawResiduals",
    "OutOfRangeError", "QuadratureConvergenceError", "RunResult",
    "SchrodingerPropagator", "SignalSpec", "SimConfig", "Sources",
    "TheoremVerdict", "TimeSeries", "airy_kernel", "airy_kernel_d2",
    "airy_standard", "build_grid", "convergence_study", "cross_validate_linear",
    "energy_E", "eval_L", "eval_V", "extract_traces", "fluxes",
    "free_airy_reference", "free_schrodinger_reference", "init_state",
    "initial_virial_data", "law_residuals", "mass", "moment_Q",
    "nonlinear_substep", "p_functional", "poly_exp_profile", "run",
    "scenario_config", "scenario_global_right", "scenario_growth_left",
    "strang_step", "table_profile", "virial_eta_terms", "weighted_norm_sq",
    "zero_profile",
]
