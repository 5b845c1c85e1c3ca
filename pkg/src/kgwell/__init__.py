"""Bound states of the one-dimensional Klein-Gordon equation in a smooth potential well.

Natural units (hbar = c = m = 1).  The well is flat at depth ``-v0`` on
``[x0, 0]`` and relaxes exponentially to zero with decay length ``a`` on both
sides.
"""

from .errors import (
    BracketInvalid,
    IntegrationFailure,
    InvalidParameter,
    KGWellError,
    NonConvergence,
    NotAnEigenvalue,
    OutOfWindow,
    QuadratureFailure,
)
from .matching import (
    EigenvalueResidual,
    MatchedWavefunction,
    closed_form_condition,
    continuity_residual,
    eigenvalue_function,
    match_coefficients,
    phi_region1,
    phi_region2,
    phi_region3,
    wavefunction_eval,
)
from .oracle import (
    IntegratorConfig,
    cusp_limit_check,
    shooting_eigenvalues,
    shooting_mismatch,
    square_well_condition,
    square_well_eigenvalues,
)
from .potential import EnergyQuantities, PotentialParams, Region, energy_quantities, potential_value, region_of
from .specfun import SeriesPolicy, kummer_m, kummer_m_derivative, whittaker_m, whittaker_m_derivative
from .spectrum import (
    BoundState,
    CriticalPoint,
    ScanConfig,
    SpectrumCurve,
    SpectrumPoint,
    StateKind,
    antiparticle_onset,
    critical_potential,
    deep_branch,
    find_bound_states,
    find_roots,
    kg_norm,
    sweep_v0,
    sweep_x0,
)

__version__ = "0.1.0"
