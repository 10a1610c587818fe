#!/usr/bin/env python3
"""
Finite-sample constants against one simulated fit
=================================================

Evaluates the deterministic error-bound report at a reference setting
(tau=0.1, n=100, p=120, s=10) and compares two of its ingredients with what
actually happens on simulated data:

  - the restricted-eigenvalue input phi_min vs a Monte-Carlo estimate on a
    generated design
  - the l2 error bound vs the observed error of a fit at the theoretical
    penalty

The bound is loose by design (worst-case constants), so expect orders of
magnitude of slack; the useful content is how it scales, not its level.
"""
import numpy as np

from explasso import (
    FitConfig,
    GaussNoise,
    fit_exponential_lasso,
    gen_beta0,
    gen_design,
    gen_noise,
    make_report,
    noise_central_mass,
    restricted_eigen_estimate,
    validate_dataset,
)

tau, n, p, s = 0.1, 100, 120, 10
c = 1.0
p0 = noise_central_mass(GaussNoise(1.0), c)

rng = np.random.default_rng(0)
x = gen_design(n, p, 0.0, rng)
beta0 = gen_beta0(p, s)
d = validate_dataset(x, x @ beta0 + gen_noise(GaussNoise(1.0), n, rng))
phi_hat = restricted_eigen_estimate(d, np.flatnonzero(beta0), trials=2000, seed=0)

rep = make_report(tau=tau, c=c, p0=p0, phi_min=phi_hat, s=s, n=n, p=p,
                  delta=0.05, K=1.0)

print(f"setting: tau={tau}, c={c}, n={n}, p={p}, s={s}")
rows = [
    (f"p0 (mass of N(0,1) within +-{c:g})", f"{p0:.4f}"),
    ("phi_min (MC over the sparse cone)", f"{phi_hat:.4f}"),
    ("influence bound 1/sqrt(e tau)", f"{rep.influence_bound:.4f}"),
    ("curvature floor gamma", f"{rep.gamma_lower:.4f}"),
    ("kappa", f"{rep.kappa:.4f}"),
    ("theoretical lambda", f"{rep.lam:.4f}"),
    ("l2 error bound", f"{rep.l2_bound:.1f}"),
    ("l1 error bound", f"{rep.l1_bound:.1f}"),
    ("probability floor", f"{rep.prob_bound:.4f}"),
]
for label, val in rows:
    print(f"{label:<36} = {val}")
print()

res = fit_exponential_lasso(d, FitConfig(tau=tau, lam=rep.lam))
err = float(np.linalg.norm(res.beta - beta0))
print(f"fit at the theoretical lambda: l2 error = {err:.3f} "
      f"(bound {rep.l2_bound:.1f}, slack x{rep.l2_bound / max(err, 1e-12):.0f})")
print(f"note: lambda={rep.lam:.2f} is far above the CV choice, so the fit has "
      f"{np.count_nonzero(res.beta)} nonzero coefficients")
