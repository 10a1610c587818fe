#!/usr/bin/env python3
"""
Loss and influence shapes across tau
====================================

Prints a small table of the exponential-type loss, its influence function,
and the MM weight at a few residual values, for tau in {0.01, 0.1, 1}.

Things to look for:
  - the loss saturates at 1/tau, so a gross outlier costs a bounded amount
  - the influence peaks at |r| = 1/sqrt(tau) and then redescends to zero
  - the weight exp(-tau r^2 / 2) is what each observation contributes to
    the next weighted-Lasso subproblem; outliers get ~0
  - at tau = 0.01 and small r the loss is indistinguishable from r^2/2
"""
import numpy as np

from explasso import ExponentialLoss, influence, influence_bound, loss_value, mm_weight

r_grid = np.array([0.0, 0.5, 1.0, 2.0, 3.16, 5.0, 10.0, 30.0])

for tau in (0.01, 0.1, 1.0):
    kind = ExponentialLoss(tau)
    print(f"tau = {tau:g}   (cap 1/tau = {1 / tau:g}, "
          f"peak influence {influence_bound(tau):.4f} at r = {1 / np.sqrt(tau):.3f})")
    print(f"  {'r':>6} {'loss':>10} {'r^2/2':>10} {'influence':>10} {'weight':>8}")
    for r in r_grid:
        print(f"  {r:6.2f} {loss_value(kind, r):10.4f} {r * r / 2:10.2f} "
              f"{influence(kind, r):10.4f} {float(mm_weight(tau, r)):8.4f}")
    print()

print("ratio loss/(r^2/2) at r=0.5 as tau -> 0:")
for tau in (1.0, 0.1, 0.01, 1e-4, 1e-8):
    print(f"  tau={tau:<8g} ratio={loss_value(ExponentialLoss(tau), 0.5) / 0.125:.8f}")
