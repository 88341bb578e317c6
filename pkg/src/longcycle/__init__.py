"""Inference on long stochastic cycles in time series.

A long cycle is an oscillation whose period is a sizable fraction of the
observed sample, modeled as an AR(2) with complex roots drifting toward
the unit circle. Conventional chi-squared Wald inference on the AR
coefficients is badly sized in this regime; this package simulates the
correct non-pivotal limit law, inverts the test over a localization grid,
and reports confidence intervals for the cycle length.

Quick tour:

    from longcycle import Localization, simulate_long_cycle, InnovationSpec, DetSpec
    from longcycle import build_table, confidence_set, GridSpec, project_tau_theta

See the README for the command-line interface.
"""

from .backend import backend_name
from .core_model import (
    ARCoefficients,
    CycleMeasures,
    Localization,
    cd_from_phi,
    cycle_measures,
    irf_weights,
    phi_from_cd,
    spectrum_peak_frequency,
)
from .dgp import (
    DetSpec,
    InnovationSpec,
    Series,
    build_deterministic,
    seasonal_dummies,
    simulate_fixed_ar2,
    simulate_innovations,
    simulate_long_cycle,
)
from .diffusion import (
    Functionals,
    PathBundle,
    functionals,
    identity_residuals,
    project_path,
    simulate_path,
    wald_draw_batch,
    wald_limit_draw,
)
from .errors import (
    ArgumentError,
    CacheMissError,
    DataError,
    LongCycleError,
    NumericalError,
    QuadratureError,
    SingularityError,
    TableChecksumError,
    TableError,
    TableFormatError,
    TableRangeError,
    TableVersionError,
)
from .estimation import (
    FitResult,
    ModifiedWaldWorkspace,
    bic_select,
    detrend,
    fit_ar2,
    long_run_variance,
    modified_wald,
    wald_grid,
    wald_statistic,
)
from .inference import (
    ConfidenceSet,
    CycleInterval,
    GridSpec,
    confidence_set,
    point_estimate,
    project_tau_omega,
    project_tau_theta,
    write_confidence_set_csv,
    write_intervals_csv,
)
from .spectral import (
    SpectrumCurve,
    expected_periodogram_limit,
    limit_periodogram_draw,
    ltu_t_statistic,
    periodogram,
    theoretical_spectrum,
)
from .tables import (
    QuantileTable,
    build_table,
    default_c_grid,
    default_d_grid,
    load_table,
    lookup,
    save_table,
    size_surface,
)

__version__ = "0.1.0"

__all__ = [
    "ARCoefficients",
    "ArgumentError",
    "CacheMissError",
    "ConfidenceSet",
    "CycleInterval",
    "CycleMeasures",
    "DataError",
    "DetSpec",
    "FitResult",
    "Functionals",
    "GridSpec",
    "InnovationSpec",
    "Localization",
    "LongCycleError",
    "ModifiedWaldWorkspace",
    "NumericalError",
    "PathBundle",
    "QuadratureError",
    "QuantileTable",
    "Series",
    "SingularityError",
    "SpectrumCurve",
    "TableChecksumError",
    "TableError",
    "TableFormatError",
    "TableRangeError",
    "TableVersionError",
    "backend_name",
    "bic_select",
    "build_deterministic",
    "build_table",
    "cd_from_phi",
    "confidence_set",
    "cycle_measures",
    "default_c_grid",
    "default_d_grid",
    "detrend",
    "expected_periodogram_limit",
    "fit_ar2",
    "functionals",
    "identity_residuals",
    "irf_weights",
    "limit_periodogram_draw",
    "load_table",
    "long_run_variance",
    "lookup",
    "ltu_t_statistic",
    "modified_wald",
    "periodogram",
    "phi_from_cd",
    "point_estimate",
    "project_path",
    "project_tau_omega",
    "project_tau_theta",
    "save_table",
    "seasonal_dummies",
    "simulate_fixed_ar2",
    "simulate_innovations",
    "simulate_long_cycle",
    "simulate_path",
    "size_surface",
    "spectrum_peak_frequency",
    "theoretical_spectrum",
    "wald_draw_batch",
    "wald_grid",
    "wald_limit_draw",
    "wald_statistic",
    "write_confidence_set_csv",
    "write_intervals_csv",
]
