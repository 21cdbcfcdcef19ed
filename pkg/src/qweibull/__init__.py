"""Robust Weibull parameter estimation by maximum log_q likelihood.

The package fits Weibull shape/scale parameters by plain maximum likelihood
and by maximizing a sum of q-deformed log densities, which tolerates inlier
and outlier contamination.  It also provides the closed-form distribution
machinery, information matrices, a genetic-algorithm optimizer, a Monte Carlo
contamination study engine, and Kolmogorov-Smirnov based selection of q.
"""

from ._errors import DomainError, FitError
from ._kernels import backend as kernel_backend
from .datasets import glass_fibre_path, load_glass_fibre
from .distributions import (
    BurrIIIParams,
    ShapeAnalysis,
    UniformParams,
    WeibullParams,
    burr3_cdf,
    burr3_pdf,
    burr3_sample,
    hazard,
    mgf,
    quadratic_entropy,
    raw_moment,
    reliability,
    residual_life_moment,
    shannon_entropy,
    shape_analysis,
    truncated_moment,
    tsallis_entropy,
    uniform_sample,
    weibull_cdf,
    weibull_pdf,
    weibull_quantile,
    weibull_sample,
    weighted_log2_moment,
    weighted_log_moment,
    weighted_moment,
)
from .gof import KsResult, ks_pvalue, ks_statistic, ks_test, select_q_by_ks
from .information import (
    ConsistencyReport,
    InfoMatrix,
    consistency_conditions,
    expected_hessian,
    fisher,
    q_fisher,
)
from .objectives import (
    ObjectiveKind,
    ObjectiveSpec,
    ScoreLimits,
    ScoreVector,
    deformed_log,
    dpd_logq_affine_diagnostic,
    dpd_objective,
    ee_residual,
    grad_loglik,
    grad_logq_lik,
    hessian_loglik,
    loglik,
    logq_lik,
    score_limit_class,
    score_psi,
    score_z,
    weight,
)
from .optimize import FitResult, GaConfig, GaResult, fit_mle, fit_mlqe, ga_maximize
from .simulate import (
    ContaminationDesign,
    SimSummary,
    contaminated_sample,
    default_q_grid,
    load_design,
    monte_carlo,
    q_grid_search,
    summaries_to_csv,
    summarize_estimates,
)

__version__ = "0.1.0"
