"""Exact ground-state fidelity of the transverse-field Ising chain.

The chain's fidelity F(g, delta) = |<g - delta | g + delta>| is computed
exactly from the free-fermion mode product, verified against dense
diagonalization on small chains, and compared with its universal
critical behavior: the closed-form scaling function of
``c = (g - 1) / |delta|`` built from analytically continued complete
elliptic integrals, the crossover between the small-system and
thermodynamic decay regimes at ``N |delta| ~ 1``, and the off-critical
and susceptibility limits.
"""

from .analysis import (
    Axis,
    FitResult,
    GMode,
    SweepTable,
    collapse_residuals,
    find_crossover,
    fit_power_law,
    local_slope,
    resolve_field,
    slope_crossing,
    sweep,
)
from .chain import (
    ChainSpec,
    FidelityValue,
    ModeSet,
    bogoliubov_angle,
    fidelity_susceptibility,
    log_fidelity,
    log_fidelity_per_site_integral,
    mode_overlap,
    momentum_grid,
)
from .ed import ed_oracle_fidelity
from .elliptic import (
    DEFAULT_CONFIG,
    EllipticConfig,
    carlson_rd,
    carlson_rf,
    carlson_rg,
    ellip_e,
    ellip_k,
)
from .errors import (
    DataQualityError,
    DegenerateDataError,
    DomainError,
    FidelityError,
    NumericalError,
    PrecisionError,
    RangeError,
    RegimeError,
    ResourceError,
)
from .scaling import (
    Formula,
    PINCH_TOLERANCE,
    PINCH_VALUE,
    Prediction,
    Regime,
    ScalingEval,
    predict_log_fidelity,
    scaling_a,
    scaling_a_asymptotic,
    scaling_a_derivative,
    scaling_parameter,
)

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "ChainSpec",
    "DataQualityError",
    "DEFAULT_CONFIG",
    "DegenerateDataError",
    "DomainError",
    "EllipticConfig",
    "FidelityError",
    "FidelityValue",
    "FitResult",
    "Formula",
    "GMode",
    "ModeSet",
    "NumericalError",
    "PINCH_TOLERANCE",
    "PINCH_VALUE",
    "PrecisionError",
    "Prediction",
    "RangeError",
    "Regime",
    "RegimeError",
    "ResourceError",
    "ScalingEval",
    "SweepTable",
    "bogoliubov_angle",
    "carlson_rd",
    "carlson_rf",
    "carlson_rg",
    "collapse_residuals",
    "ed_oracle_fidelity",
    "ellip_e",
    "ellip_k",
    "fidelity_susceptibility",
    "find_crossover",
    "fit_power_law",
    "local_slope",
    "log_fidelity",
    "log_fidelity_per_site_integral",
    "mode_overlap",
    "momentum_grid",
    "predict_log_fidelity",
    "resolve_field",
    "scaling_a",
    "scaling_a_asymptotic",
    "scaling_a_derivative",
    "scaling_parameter",
    "slope_crossing",
    "sweep",
]
