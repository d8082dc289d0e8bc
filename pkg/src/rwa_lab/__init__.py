"""rwa-lab: distributions of randomly weighted averages.

Compute, sample and verify the laws of S = sum_j R_j X_j where the random
weights R are increments of uniform order statistics (blockwise Dirichlet):
the exact conditional CDF given the atom values, Stieltjes-transform product
identities, variance over the power-spacings weight class, and the limit
experiments, all cross-checked against Monte Carlo.
"""

__version__ = "0.1.0"

from .atoms import AtomConfig, WeightScheme, normalize, scheme_from_indices
from .backend import BACKEND
from .dists import (
    Dist,
    arcsin,
    cauchy,
    exponential,
    parse_dist,
    point_mass,
    power_dist,
    power_semicircle,
    semicircle,
    uniform,
)
from .kernel import (
    MixtureEstimate,
    ReciprocalShift,
    ShiftedPower,
    kernel_apply,
    mixture_cdf,
    mixture_cdf_grid,
    weisberg_cdf,
    weisberg_cdf_grid,
)
from .limits import ConvergenceTable, convergence_experiment, max_spacing_stats
from .mc import (
    Ecdf,
    RngState,
    ks_distance,
    sample_rwa,
    sample_weights_dirichlet,
    sample_weights_orderstat,
)
from .series import LinearFactor, Series, derivative_of_factor_product, series_mul, series_of_factor
from .stieltjes import (
    ResidualReport,
    closed_form_transform,
    eq31_residual,
    remark1_residual,
    theorem1_residual,
    transform_deriv,
)
from .variance import (
    VarianceCurve,
    dvariance_dtheta_at1,
    expected_sq_sum,
    mc_expected_sq_sum,
    variance_curve,
)

__all__ = [
    "AtomConfig", "BACKEND", "ConvergenceTable", "Dist", "Ecdf",
    "LinearFactor", "MixtureEstimate", "ReciprocalShift", "ResidualReport",
    "RngState", "Series", "ShiftedPower", "VarianceCurve", "WeightScheme",
    "arcsin", "cauchy", "closed_form_transform", "convergence_experiment",
    "derivative_of_factor_product", "dvariance_dtheta_at1", "eq31_residual",
    "expected_sq_sum", "exponential", "kernel_apply", "ks_distance",
    "max_spacing_stats", "mc_expected_sq_sum", "mixture_cdf",
    "mixture_cdf_grid", "normalize",
    "parse_dist", "point_mass", "power_dist", "power_semicircle",
    "remark1_residual", "sample_rwa", "sample_weights_dirichlet",
    "sample_weights_orderstat", "scheme_from_indices", "semicircle",
    "series_mul", "series_of_factor", "theorem1_residual", "transform_deriv",
    "uniform", "variance_curve", "weisberg_cdf", "weisberg_cdf_grid",
]
