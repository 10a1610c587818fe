"""Penalty selection: lambda grids, warm-started paths, K-fold CV, and the
theory-driven penalty level."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    Dataset,
    FitConfig,
    FitResult,
    INVALID_CONFIG,
    SolverError,
    validate_dataset,
)
from .losses import ExponentialLoss, LossKind, empirical_loss
from .mm import fit as _fit
from .wlasso import lambda_max

DEFAULT_NLAMBDA = 100


def default_grid_ratio(n: int, p: int) -> float:
    """Smallest-to-largest grid ratio: 1e-3 when n < p, else 1e-4."""
    return 1e-3 if n < p else 1e-4


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly decreasing, log-spaced penalty levels."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 1:
            raise SolverError(INVALID_CONFIG, "grid must be a 1-d array")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise SolverError(INVALID_CONFIG, "grid values must be positive and finite")
        if np.any(np.diff(v) >= 0):
            raise SolverError(INVALID_CONFIG, "grid values must be strictly decreasing")
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.size


def make_grid(
    d: Dataset, m: int = DEFAULT_NLAMBDA, ratio: float | None = None
) -> LambdaGrid:
    """Log-spaced grid from the unweighted lambda_max down to ratio * lambda_max.

    The top value is computed with unit weights, so the squared-loss fit
    there is exactly zero; robust fits at the same level are typically zero
    or nearly so.
    """
    if m < 2:
        raise SolverError(INVALID_CONFIG, f"grid size must be >= 2, got {m}")
    if ratio is None:
        ratio = default_grid_ratio(d.n, d.p)
    if not (0.0 < ratio < 1.0):
        raise SolverError(INVALID_CONFIG, f"ratio must be in (0, 1), got {ratio}")
    top = lambda_max(d)
    if top <= 0.0:
        raise SolverError(
            INVALID_CONFIG, "lambda_max is zero (y orthogonal to every column)"
        )
    values = np.geomspace(top, ratio * top, m)
    # pin the endpoints: geomspace can land an ulp under lambda_max, which
    # would spuriously activate one coordinate at the top of the path
    values[0] = top
    values[-1] = ratio * top
    return LambdaGrid(values)


def fit_path(
    d: Dataset,
    grid: LambdaGrid,
    kind: LossKind,
    cfg: FitConfig,
) -> list[FitResult]:
    """Fit the full path over the grid, warm-starting each fit from the last.

    cfg.lam is ignored; cfg.init applies only in the sense that the first
    (largest-penalty) fit starts from zeros, which is exact there.
    """
    fits: list[FitResult] = []
    warm: np.ndarray | str = "zeros"
    for lam in grid.values:
        res = _fit(d, kind, replace(cfg, lam=float(lam), init=warm))
        fits.append(res)
        warm = res.beta
    return fits


@dataclass(frozen=True)
class CvResult:
    """Cross-validation summary over a penalty grid.

    ``fold_losses[f, i]`` is fold f's validation score at grid value i;
    cv_mean / cv_se aggregate over folds.  lambda_1se is the largest penalty
    whose mean score is within one standard error of the best.
    """

    grid: LambdaGrid
    cv_mean: np.ndarray
    cv_se: np.ndarray
    lambda_min: float
    lambda_1se: float
    fold_assignments: np.ndarray
    fold_losses: np.ndarray


def _fold_assignments(n: int, k: int, seed: int) -> np.ndarray:
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.empty(n, dtype=np.int64)
    for f, chunk in enumerate(np.array_split(perm, k)):
        folds[chunk] = f
    return folds


def _score(score: str, kind: LossKind, d_val: Dataset, beta: np.ndarray) -> float:
    if score == "mse":
        r = d_val.y - d_val.x @ beta
        return float(np.mean(r * r))
    if score == "exp_loss":
        tau = kind.tau if isinstance(kind, ExponentialLoss) else 0.1
        return empirical_loss(ExponentialLoss(tau), d_val, beta)
    raise SolverError(INVALID_CONFIG, f"unknown score {score!r}")


def cross_validate(
    d: Dataset,
    cfg: FitConfig,
    grid: LambdaGrid,
    k: int = 5,
    seed: int = 0,
    kind: LossKind | None = None,
    score: str = "mse",
    folds: np.ndarray | None = None,
) -> CvResult:
    """K-fold cross-validation of the penalty level.

    Folds are a seeded permutation split into k nearly equal parts (sizes
    differ by at most one); pass ``folds`` explicitly to override.  Each
    training part is fit over the whole grid with warm starts and scored on
    the held-out part ('mse' by default, 'exp_loss' for the robust loss
    itself).  Deterministic: same inputs and seed give identical results.
    """
    if kind is None:
        kind = ExponentialLoss(cfg.tau)
    if folds is None:
        if not (2 <= k <= d.n):
            raise SolverError(INVALID_CONFIG, f"k must be in [2, n], got {k}")
        folds = _fold_assignments(d.n, k, seed)
    else:
        folds = np.asarray(folds, dtype=np.int64)
        if folds.shape != (d.n,):
            raise SolverError(
                INVALID_CONFIG, f"folds has shape {folds.shape}, expected ({d.n},)"
            )
        k = int(folds.max()) + 1

    losses = np.empty((k, grid.m))
    for f in range(k):
        val = folds == f
        if not val.any() or val.all():
            raise SolverError(INVALID_CONFIG, f"fold {f} is empty or covers all rows")
        d_tr = validate_dataset(d.x[~val], d.y[~val], d.feature_names)
        d_va = validate_dataset(d.x[val], d.y[val], d.feature_names)
        for i, res in enumerate(fit_path(d_tr, grid, kind, cfg)):
            losses[f, i] = _score(score, kind, d_va, res.beta)

    cv_mean = losses.mean(axis=0)
    cv_se = losses.std(axis=0, ddof=1) / np.sqrt(k)
    best = int(np.argmin(cv_mean))  # ties resolve to the largest penalty
    lam_min = float(grid.values[best])
    within = cv_mean <= cv_mean[best] + cv_se[best]
    lam_1se = float(grid.values[int(np.argmax(within))])
    return CvResult(grid, cv_mean, cv_se, lam_min, lam_1se, folds, losses)


def theoretical_lambda(
    K: float, tau: float, n: int, p: int, delta: float = 0.05
) -> float:
    """Penalty level (4K / sqrt(e tau)) * sqrt(2 log(2p/delta) / n).

    K bounds the column magnitudes of the design; the result scales like
    sqrt(log p / n) and inherits the influence bound's 1/sqrt(tau) factor.
    """
    if not (np.isfinite(K) and K > 0):
        raise SolverError(INVALID_CONFIG, f"K must be positive, got {K}")
    if not (np.isfinite(tau) and tau > 0):
        raise SolverError(INVALID_CONFIG, f"tau must be positive, got {tau}")
    if n < 1 or p < 1:
        raise SolverError(INVALID_CONFIG, f"n and p must be >= 1, got n={n}, p={p}")
    if not (0.0 < delta < 1.0):
        raise SolverError(INVALID_CONFIG, f"delta must be in (0, 1), got {delta}")
    return float(
        4.0 * K / np.sqrt(np.e * tau) * np.sqrt(2.0 * np.log(2.0 * p / delta) / n)
    )
