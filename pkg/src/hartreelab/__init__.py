"""Numerical laboratory for modified scattering of long-range Hartree-type equations."""

from .errors import ConfigError, GridMismatchError, ParameterError, QuadratureError
from .grids import (
    ComplexField,
    GridSpec,
    RealField,
    VectorField,
    read_field,
    write_field,
)
from .model import AdmissiblePair, ModelParams, check_admissible, g0, g_diag
from .gaussians import GaussianSymbol, gaussian_apply, mdfm_compose
from .spectral import (
    apply_multiplier,
    free_propagator,
    galilei_norm,
    homogeneous_norm,
    lr_norm,
    riesz_potential,
    sobolev_norm,
    x_norm,
)
from .profiles import AsymptoticDatum, phi0_from_phi02, phi02_of_t, s0_of_t, s02_of_t
from .dynamics import (
    AuxState,
    IntegratorConfig,
    TrajectoryRecord,
    aux_rhs,
    cross_check_gauge,
    gradient_gap,
    integrate_aux,
    rescaled_nls_step,
    vorticity_max,
)
from .scattering import (
    GaugeFunction,
    WaveOpRun,
    extract_s0,
    extract_s02,
    extract_w_plus,
    gauge_covariance_check,
    gauge_transform,
    heuristic_T,
    omega1_map,
    omega_map,
    phi_map,
    round_trip_check,
    seed_at_t0,
    wave_operator_W,
)
from .ratelab import RateFit, Verdict, fit_power_law, lr_profile_errors, profile_error_series
from .acceptance import AcceptanceConfig, run_acceptance_suite

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
