"""explasso: robust sparse regression with an exponential-type loss.

The estimator minimizes a bounded, smooth loss of the residuals plus an L1
penalty.  Heavy-tailed noise and gross outliers get exponentially small
influence, while for small curvature the fit approaches the ordinary Lasso.
Fitting alternates closed-form observation reweighting with weighted-Lasso
coordinate descent.
"""

from .core import (
    CONVERGED,
    DEFAULT_TAU,
    Dataset,
    FitConfig,
    FitResult,
    MAX_ITER_REACHED,
    SolverError,
    StandardizeInfo,
    destandardize_coefficients,
    standardize,
    validate_dataset,
)
from .losses import (
    ExponentialLoss,
    HuberLoss,
    LossKind,
    SquaredLoss,
    empirical_gradient,
    empirical_loss,
    huber_weight,
    influence,
    influence_bound,
    loss_value,
    method_label,
    mm_weight,
)
from .mm import (
    MmTrace,
    fit,
    fit_baseline,
    fit_exponential_lasso,
    kkt_certificate,
    objective,
    penalized_objective,
    stationarity_certificate,
)
from .sim import (
    AggregateRow,
    CauchyNoise,
    ContaminatedNoise,
    GaussNoise,
    MetricsRow,
    NoiseSpec,
    OutlierSpec,
    ScenarioResult,
    ScenarioSpec,
    StudentNoise,
    evaluate,
    gen_beta0,
    gen_design,
    gen_noise,
    load_scenario,
    noise_central_mass,
    run_replication,
    run_scenario,
    scenario_from_dict,
    scenario_to_dict,
    write_results_csv,
)
from .theory import (
    TheoryReport,
    curvature_lower,
    error_bounds,
    kappa,
    make_report,
    rayleigh_quotient,
    restricted_eigen_estimate,
)
from .tune import (
    CvResult,
    LambdaGrid,
    cross_validate,
    default_grid_ratio,
    fit_path,
    make_grid,
    theoretical_lambda,
)
from .wlasso import (
    CdResult,
    WeightedProblem,
    cd_update_coordinate,
    lambda_max,
    soft_threshold,
    solve_weighted_lasso,
    weighted_kkt_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "CONVERGED",
    "CauchyNoise",
    "CdResult",
    "ContaminatedNoise",
    "CvResult",
    "DEFAULT_TAU",
    "Dataset",
    "ExponentialLoss",
    "FitConfig",
    "FitResult",
    "GaussNoise",
    "HuberLoss",
    "LambdaGrid",
    "LossKind",
    "MAX_ITER_REACHED",
    "MetricsRow",
    "MmTrace",
    "NoiseSpec",
    "OutlierSpec",
    "ScenarioResult",
    "ScenarioSpec",
    "SolverError",
    "SquaredLoss",
    "StandardizeInfo",
    "StudentNoise",
    "TheoryReport",
    "WeightedProblem",
    "cd_update_coordinate",
    "cross_validate",
    "curvature_lower",
    "default_grid_ratio",
    "destandardize_coefficients",
    "empirical_gradient",
    "empirical_loss",
    "error_bounds",
    "evaluate",
    "fit",
    "fit_baseline",
    "fit_exponential_lasso",
    "fit_path",
    "gen_beta0",
    "gen_design",
    "gen_noise",
    "huber_weight",
    "influence",
    "influence_bound",
    "kappa",
    "kkt_certificate",
    "lambda_max",
    "load_scenario",
    "loss_value",
    "make_grid",
    "make_report",
    "method_label",
    "mm_weight",
    "noise_central_mass",
    "objective",
    "penalized_objective",
    "rayleigh_quotient",
    "restricted_eigen_estimate",
    "run_replication",
    "run_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "soft_threshold",
    "solve_weighted_lasso",
    "standardize",
    "stationarity_certificate",
    "theoretical_lambda",
    "validate_dataset",
    "weighted_kkt_residual",
    "write_results_csv",
]
