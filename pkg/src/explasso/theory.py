"""Finite-sample constants and error-bound diagnostics.

These routines evaluate the curvature and restricted-eigenvalue quantities
that control the estimator's statistical error, and assemble them into a
report for a concrete (n, p, s) problem size.  A Monte-Carlo check of the
restricted eigenvalue on actual data is included because the population
constants are rarely available outside simulations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, INVALID_CONFIG, SolverError
from .losses import influence_bound
from .tune import theoretical_lambda


def curvature_lower(tau: float, c: float) -> float:
    """Lower bound exp(-tau c^2 / 2) * (1 - tau c^2) on the loss curvature
    over residuals with |r| <= c.

    Positive only while c < 1/sqrt(tau); beyond that the bound is useless and
    the inputs are rejected.
    """
    if not (np.isfinite(tau) and tau > 0):
        raise SolverError(INVALID_CONFIG, f"tau must be positive, got {tau}")
    if not (np.isfinite(c) and 0 < c < 1.0 / np.sqrt(tau)):
        raise SolverError(
            INVALID_CONFIG,
            f"c must lie in (0, 1/sqrt(tau)) = (0, {1.0 / np.sqrt(tau):.6g}), got {c}",
        )
    return float(np.exp(-tau * c * c / 2.0) * (1.0 - tau * c * c))


def kappa(p0: float, gamma_lower: float, phi_min: float) -> float:
    """Effective restricted curvature (p0/2) * gamma_lower * phi_min.

    p0 is the probability mass of residuals in the central region, and
    phi_min the restricted eigenvalue of the design.
    """
    if not (0.0 < p0 <= 1.0):
        raise SolverError(INVALID_CONFIG, f"p0 must be in (0, 1], got {p0}")
    if not (np.isfinite(gamma_lower) and gamma_lower > 0):
        raise SolverError(
            INVALID_CONFIG, f"gamma_lower must be positive, got {gamma_lower}"
        )
    if not (np.isfinite(phi_min) and phi_min > 0):
        raise SolverError(INVALID_CONFIG, f"phi_min must be positive, got {phi_min}")
    return float(p0 / 2.0 * gamma_lower * phi_min)


def error_bounds(lam: float, s: int, kap: float) -> tuple[float, float]:
    """High-probability error bounds (l2, l1) = (12 lam sqrt(s)/kap, 48 lam s/kap)."""
    if not (np.isfinite(lam) and lam > 0):
        raise SolverError(INVALID_CONFIG, f"lam must be positive, got {lam}")
    if s < 1:
        raise SolverError(INVALID_CONFIG, f"s must be >= 1, got {s}")
    if not (np.isfinite(kap) and kap > 0):
        raise SolverError(INVALID_CONFIG, f"kappa must be positive, got {kap}")
    return 12.0 * lam * np.sqrt(s) / kap, 48.0 * lam * s / kap


def rayleigh_quotient(d: Dataset, delta: np.ndarray) -> float:
    """||X delta||^2 / (n ||delta||^2) for a nonzero direction delta."""
    delta = np.asarray(delta, dtype=np.float64)
    nrm2 = float(delta @ delta)
    if nrm2 <= 0:
        raise SolverError(INVALID_CONFIG, "delta must be nonzero")
    q = d.x @ delta
    return float(q @ q) / (d.n * nrm2)


def restricted_eigen_estimate(
    d: Dataset,
    support: np.ndarray,
    trials: int = 500,
    seed: int = 0,
) -> float:
    """Monte-Carlo lower estimate of the restricted eigenvalue over the cone
    ||delta_off_support||_1 <= 3 ||delta_on_support||_1.

    Directions are sampled with a spherical support block and an off-support
    block rescaled to a uniformly drawn fraction of the cone's l1 budget;
    the reported value is the minimum Rayleigh quotient seen.  It is an
    estimate (an upper bound on the true cone minimum) that tightens as
    ``trials`` grows.
    """
    support = np.asarray(support, dtype=np.int64)
    if support.ndim != 1 or support.size < 1:
        raise SolverError(INVALID_CONFIG, "support must be a nonempty 1-d index array")
    if support.size != np.unique(support).size:
        raise SolverError(INVALID_CONFIG, "support contains repeated indices")
    if support.min() < 0 or support.max() >= d.p:
        raise SolverError(INVALID_CONFIG, "support index out of range")
    if trials < 1:
        raise SolverError(INVALID_CONFIG, f"trials must be >= 1, got {trials}")
    off = np.setdiff1d(np.arange(d.p), support)
    rng = np.random.default_rng(seed)
    best = np.inf
    delta = np.zeros(d.p)
    for _ in range(trials):
        ds = rng.standard_normal(support.size)
        ds /= np.linalg.norm(ds)
        delta[:] = 0.0
        delta[support] = ds
        if off.size:
            doff = rng.standard_normal(off.size)
            l1_off = np.sum(np.abs(doff))
            budget = rng.uniform() * 3.0 * np.sum(np.abs(ds))
            if l1_off > 0:
                delta[off] = doff * (budget / l1_off)
        best = min(best, rayleigh_quotient(d, delta))
    return float(best)


@dataclass(frozen=True)
class TheoryReport:
    """All theory constants for one problem configuration, inputs echoed."""

    tau: float
    c: float
    p0: float
    phi_min: float
    s: int
    n: int
    p: int
    delta: float
    K: float
    influence_bound: float
    gamma_lower: float
    kappa: float
    lam: float
    l2_bound: float
    l1_bound: float
    prob_bound: float


def make_report(
    tau: float,
    c: float,
    p0: float,
    phi_min: float,
    s: int,
    n: int,
    p: int,
    delta: float = 0.05,
    K: float = 1.0,
) -> TheoryReport:
    """Assemble the full chain lambda -> curvature -> kappa -> error bounds.

    ``prob_bound`` is the conservative probability floor
    1 - delta - 2 exp(-n p0^2 / 8) for the event behind the bounds; it can be
    negative for small n, which simply means the guarantee is vacuous there.
    """
    gam = curvature_lower(tau, c)
    kap = kappa(p0, gam, phi_min)
    lam = theoretical_lambda(K, tau, n, p, delta)
    l2, l1 = error_bounds(lam, s, kap)
    prob = 1.0 - delta - 2.0 * float(np.exp(-n * p0 * p0 / 8.0))
    return TheoryReport(
        tau=tau,
        c=c,
        p0=p0,
        phi_min=phi_min,
        s=s,
        n=n,
        p=p,
        delta=delta,
        K=K,
        influence_bound=influence_bound(tau),
        gamma_lower=gam,
        kappa=kap,
        lam=lam,
        l2_bound=l2,
        l1_bound=l1,
        prob_bound=prob,
    )
