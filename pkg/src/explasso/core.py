"""Shared containers, input validation, and the error taxonomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# Error kinds carried by SolverError.kind.
DIMENSION_MISMATCH = "dimension_mismatch"
NONFINITE_INPUT = "nonfinite_input"
INVALID_CONFIG = "invalid_config"
DEGENERATE_COLUMN = "degenerate_column"
IO_ERROR = "io_error"
PARSE_ERROR = "parse_error"

# Fit status values.
CONVERGED = "converged"
MAX_ITER_REACHED = "max_iter_reached"

DEFAULT_TAU = 0.1


class SolverError(Exception):
    """Raised on any violated precondition; ``kind`` names the failed check."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind
        self.message = message


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Validated design matrix and response.

    ``x`` is stored column-major (coordinate descent walks columns) and both
    arrays are marked read-only.  Build instances through
    :func:`validate_dataset`.
    """

    x: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] | None = None

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


def validate_dataset(
    x: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str] | None = None,
) -> Dataset:
    """Check shapes and finiteness, returning an immutable Dataset.

    Validating the arrays of a returned Dataset succeeds and reproduces the
    same content, so the operation is idempotent.
    """
    x = np.array(x, dtype=np.float64, order="F", copy=True)
    y = np.array(y, dtype=np.float64, copy=True)
    if x.ndim != 2:
        raise SolverError(DIMENSION_MISMATCH, f"x must be 2-d, got ndim={x.ndim}")
    if y.ndim != 1:
        raise SolverError(DIMENSION_MISMATCH, f"y must be 1-d, got ndim={y.ndim}")
    if x.shape[0] != y.shape[0]:
        raise SolverError(
            DIMENSION_MISMATCH,
            f"x has {x.shape[0]} rows but y has {y.shape[0]} entries",
        )
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise SolverError(DIMENSION_MISMATCH, "x must have at least one row and column")
    if not np.all(np.isfinite(x)):
        raise SolverError(NONFINITE_INPUT, "x contains NaN or infinite entries")
    if not np.all(np.isfinite(y)):
        raise SolverError(NONFINITE_INPUT, "y contains NaN or infinite entries")
    names = None
    if feature_names is not None:
        names = tuple(str(s) for s in feature_names)
        if len(names) != x.shape[1]:
            raise SolverError(
                DIMENSION_MISMATCH,
                f"{len(names)} feature names for {x.shape[1]} columns",
            )
    return Dataset(_readonly(x), _readonly(y), names)


@dataclass(frozen=True)
class StandardizeInfo:
    """Centering/scaling constants needed to map coefficients back."""

    x_mean: np.ndarray
    x_scale: np.ndarray
    y_mean: float


def standardize(d: Dataset) -> tuple[Dataset, StandardizeInfo]:
    """Center y and center/scale columns of x to sample sd 1.

    Returns the transformed dataset together with the constants required by
    :func:`destandardize_coefficients`.  Constant columns cannot be scaled and
    raise a degenerate_column error.
    """
    x_mean = d.x.mean(axis=0)
    x_scale = d.x.std(axis=0, ddof=1) if d.n > 1 else np.zeros(d.p)
    bad = np.flatnonzero(x_scale == 0.0)
    if bad.size:
        raise SolverError(
            DEGENERATE_COLUMN, f"column {bad[0]} is constant and cannot be scaled"
        )
    y_mean = float(d.y.mean())
    xs = (d.x - x_mean) / x_scale
    ys = d.y - y_mean
    return validate_dataset(xs, ys, d.feature_names), StandardizeInfo(
        x_mean, x_scale, y_mean
    )


def destandardize_coefficients(
    beta: np.ndarray, info: StandardizeInfo
) -> tuple[np.ndarray, float]:
    """Map coefficients fit on standardized data back to the original scale.

    Returns ``(beta_orig, intercept)`` such that predictions
    ``x @ beta_orig + intercept`` agree with the standardized-scale fit.
    """
    beta_orig = np.asarray(beta, dtype=np.float64) / info.x_scale
    intercept = info.y_mean - float(info.x_mean @ beta_orig)
    return beta_orig, intercept


@dataclass(frozen=True)
class FitConfig:
    """Solver settings shared by the MM driver and baselines.

    Arguments
    ---------
    tau : curvature of the exponential loss (> 0).
    lam : L1 penalty level (>= 0).
    mm_tol : relative-step tolerance for the outer MM loop.
    mm_max_iter : cap on outer iterations.
    cd_tol : coordinate-change tolerance for the inner solver.
    cd_max_iter : cap on inner coordinate-descent sweeps.
    init : 'ordinary_lasso', 'zeros', or an explicit start vector.
    """

    tau: float = DEFAULT_TAU
    lam: float = 0.1
    mm_tol: float = 1e-6
    mm_max_iter: int = 100
    cd_tol: float = 1e-7
    cd_max_iter: int = 10_000
    init: str | np.ndarray = "ordinary_lasso"

    def __post_init__(self):
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise SolverError(INVALID_CONFIG, f"tau must be positive, got {self.tau}")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise SolverError(
                INVALID_CONFIG, f"lam must be nonnegative, got {self.lam}"
            )
        for name in ("mm_tol", "cd_tol"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise SolverError(INVALID_CONFIG, f"{name} must be positive, got {v}")
        for name in ("mm_max_iter", "cd_max_iter"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and v >= 1):
                raise SolverError(
                    INVALID_CONFIG, f"{name} must be a positive integer, got {v}"
                )
        if isinstance(self.init, str):
            if self.init not in ("ordinary_lasso", "zeros"):
                raise SolverError(
                    INVALID_CONFIG,
                    f"init must be 'ordinary_lasso', 'zeros', or an array, "
                    f"got {self.init!r}",
                )
        else:
            arr = np.asarray(self.init, dtype=np.float64)
            if arr.ndim != 1:
                raise SolverError(INVALID_CONFIG, "init array must be 1-d")
            if not np.all(np.isfinite(arr)):
                raise SolverError(NONFINITE_INPUT, "init array contains non-finite entries")
            object.__setattr__(self, "init", arr)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a single penalized fit.

    ``beta`` lives on the scale of the data that was fit; ``intercept`` is 0
    unless the caller standardized and mapped back.  ``objective_trace`` holds
    the penalized objective at the initial point and after every outer
    iteration.  ``kkt_residual`` is the stationarity certificate at ``beta``.
    """

    beta: np.ndarray
    intercept: float
    weights: np.ndarray
    objective_trace: np.ndarray
    status: str
    kkt_residual: float
    iterations: int
    trace: object | None = field(default=None, repr=False)
    n_frozen: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED
