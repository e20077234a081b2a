"""Gaussian-process reconstruction of sparse time series, scored by
rolling autoregressive forecasts.

The top level re-exports the working vocabulary; the experiment driver
lives in :mod:`gpfill.cli` and the figure rendering in
:mod:`gpfill.figures` (neither is imported here so that library use
never pulls in matplotlib).
"""

__version__ = "0.1.0"

from .arima import (ArimaFit, ArimaOrder, DifferenceState, css_residuals,
                    difference, fit_ar_yule_walker, fit_arima_css, forecast,
                    solve_yule_walker, undifference, undifference_full)
from .errors import (AsymmetryError, CholeskyFailure, DimensionMismatch,
                     DomainError, EmptyObservations, GpfillError,
                     InfeasibleSparsity, LengthMismatch, NoEvaluablePoints,
                     NonFiniteObjective, NonMonotonicTime, OptimizerFailure,
                     ParseError, SeriesTooShort, SingularToeplitz,
                     StateMismatch, ValidationError)
from .evaluate import (EvalReport, PointScore, SecondaryModelSpec, SkippedPoint,
                       mape, mape_ar)
from .gpr import (GPPosterior, cholesky_psd, fit, predict_cov, predict_mean,
                  predict_var, sample_posterior)
from .kernels import KernelParams, kernel_matrix, kernel_value, validate_params
from .optim import NelderMeadOptions, nelder_mead
from .series import Observations, TimeGrid, TimeSeries, make_grid
from .simulate import sample_gp_prior, sparsify

__all__ = [
    "__version__",
    "ArimaFit", "ArimaOrder", "DifferenceState", "css_residuals", "difference",
    "fit_ar_yule_walker", "fit_arima_css", "forecast", "solve_yule_walker",
    "undifference", "undifference_full",
    "AsymmetryError", "CholeskyFailure", "DimensionMismatch", "DomainError",
    "EmptyObservations", "GpfillError", "InfeasibleSparsity", "LengthMismatch",
    "NoEvaluablePoints", "NonFiniteObjective", "NonMonotonicTime",
    "OptimizerFailure", "ParseError", "SeriesTooShort", "SingularToeplitz",
    "StateMismatch", "ValidationError",
    "EvalReport", "PointScore", "SecondaryModelSpec", "SkippedPoint",
    "mape", "mape_ar",
    "GPPosterior", "cholesky_psd", "fit", "predict_cov", "predict_mean",
    "predict_var", "sample_posterior",
    "KernelParams", "kernel_matrix", "kernel_value", "validate_params",
    "NelderMeadOptions", "nelder_mead",
    "Observations", "TimeGrid", "TimeSeries", "make_grid",
    "sample_gp_prior", "sparsify",
]
