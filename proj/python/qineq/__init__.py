"""Energy density and quantum-inequality checks for a scalar field between
two delta-function barriers.

The numerical work happens in the compiled ``_core`` extension; this package
re-exports it.
"""

from ._core import (  # noqa: F401
    MAX_BETA_COUPLING,
    BoxSpec,
    DensityProfile,
    Error,
    FiniteBoxRun,
    NormCheck,
    Parity,
    PotentialSpec,
    SamplingFunction,
    SamplingKind,
    Tolerances,
    beta_coefficient,
    beta_components,
    continuum_extrapolate,
    default_n_max,
    density_profile,
    eta_components,
    finite_box_density,
    integrated_box_energy,
    jump_consistency,
    lowest_frequencies,
    qi_bound,
    region1_density_spectral,
    run_cli,
    scattering_data,
    shooting_extrapolated,
    spectrum,
    validate_mode,
    violation_report,
    weighted_density,
)

__version__ = "0.1.0"
