"""Loss functions and their derivatives.

The exponential loss (1/tau) * (1 - exp(-tau r^2 / 2)) is bounded, smooth,
and recovers half the squared error as tau -> 0.  Its derivative, the
influence function, is bounded and redescending, which is what buys
robustness to gross outliers.  Squared and Huber losses are carried along as
baselines for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DIMENSION_MISMATCH,
    INVALID_CONFIG,
    Dataset,
    SolverError,
)

DEFAULT_HUBER_K = 1.345  # classical 95%-efficiency tuning constant


@dataclass(frozen=True)
class ExponentialLoss:
    tau: float

    def __post_init__(self):
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise SolverError(INVALID_CONFIG, f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class SquaredLoss:
    pass


@dataclass(frozen=True)
class HuberLoss:
    k: float = DEFAULT_HUBER_K

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise SolverError(INVALID_CONFIG, f"k must be positive, got {self.k}")


LossKind = ExponentialLoss | SquaredLoss | HuberLoss


def method_label(kind: LossKind) -> str:
    """Short human-readable tag, used in result tables and CSV output."""
    if isinstance(kind, ExponentialLoss):
        return f"exponential(tau={kind.tau:g})"
    if isinstance(kind, SquaredLoss):
        return "squared"
    if isinstance(kind, HuberLoss):
        return f"huber(k={kind.k:g})"
    raise SolverError(INVALID_CONFIG, f"unknown loss kind {kind!r}")


def loss_value(kind: LossKind, r):
    """Pointwise loss at residual r (scalar or array)."""
    r = np.asarray(r, dtype=np.float64)
    if isinstance(kind, ExponentialLoss):
        # expm1 keeps full precision when tau r^2 is tiny (the near-quadratic
        # regime), where 1 - exp(-u) would cancel
        return -np.expm1(-kind.tau * r * r / 2.0) / kind.tau
    if isinstance(kind, SquaredLoss):
        return r * r / 2.0
    if isinstance(kind, HuberLoss):
        a = np.abs(r)
        return np.where(a <= kind.k, r * r / 2.0, kind.k * a - kind.k * kind.k / 2.0)
    raise SolverError(INVALID_CONFIG, f"unknown loss kind {kind!r}")


def influence(kind: LossKind, r):
    """Derivative of the loss in the residual (the influence function)."""
    r = np.asarray(r, dtype=np.float64)
    if isinstance(kind, ExponentialLoss):
        return r * np.exp(-kind.tau * r * r / 2.0)
    if isinstance(kind, SquaredLoss):
        return r.copy() if r.ndim else r + 0.0
    if isinstance(kind, HuberLoss):
        return np.clip(r, -kind.k, kind.k)
    raise SolverError(INVALID_CONFIG, f"unknown loss kind {kind!r}")


def influence_bound(tau: float) -> float:
    """Supremum of |influence| for the exponential loss: 1/sqrt(e*tau)."""
    if not (np.isfinite(tau) and tau > 0):
        raise SolverError(INVALID_CONFIG, f"tau must be positive, got {tau}")
    return 1.0 / np.sqrt(np.e * tau)


def mm_weight(tau: float, r):
    """Multiplicative weight exp(-tau r^2 / 2) used by the outer loop.

    Satisfies mm_weight(tau, r) * r == influence(ExponentialLoss(tau), r)
    identically; weights lie in (0, 1] but may underflow to 0 for huge
    residuals, which downstream code treats as a degenerate column.
    """
    if not (np.isfinite(tau) and tau > 0):
        raise SolverError(INVALID_CONFIG, f"tau must be positive, got {tau}")
    r = np.asarray(r, dtype=np.float64)
    return np.exp(-tau * r * r / 2.0)


def huber_weight(k: float, r):
    """IRLS weight min(1, k/|r|) for the Huber loss."""
    if not (np.isfinite(k) and k > 0):
        raise SolverError(INVALID_CONFIG, f"k must be positive, got {k}")
    r = np.asarray(r, dtype=np.float64)
    a = np.abs(r)
    out = np.ones_like(a)
    big = a > k
    # only divide where |r| > k, so r == 0 never hits a division
    np.divide(k, a, out=out, where=big)
    return out if out.ndim else float(out)


def _residual(d: Dataset, beta: np.ndarray) -> np.ndarray:
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (d.p,):
        raise SolverError(
            DIMENSION_MISMATCH, f"beta has shape {beta.shape}, expected ({d.p},)"
        )
    return d.y - d.x @ beta


def empirical_loss(kind: LossKind, d: Dataset, beta: np.ndarray) -> float:
    """Average loss (1/n) sum_i loss(y_i - x_i' beta)."""
    return float(np.mean(loss_value(kind, _residual(d, beta))))


def empirical_gradient(kind: LossKind, d: Dataset, beta: np.ndarray) -> np.ndarray:
    """Gradient of the average loss: -(1/n) X' psi(residuals)."""
    psi = influence(kind, _residual(d, beta))
    return -(d.x.T @ psi) / d.n
