"""Simulated duels and the double-sided exponential walk against exact values.

Uses every core by default; the estimates do not depend on the worker count.
"""

import os
from fractions import Fraction

from competing_binomials import DuelParams, SimConfig, mc_double_exp, mc_duel, p_exact

workers = os.cpu_count() or 1
trials = 1_000_000

print(f"coin duels, {trials} trials each")
for alpha, n, r, d in [("3/10", 1, 1, 1), ("1/2", 10, 1, 1), ("1/5", 5, 3, 1), ("2/5", 7, 5, 4), ("9/10", 0, 2, 3)]:
    p = DuelParams(Fraction(alpha), n, r, d)
    est = mc_duel(p, SimConfig(trials, seed=2024, workers=workers))
    exact = p_exact(p)
    print(f"  {p}: p_hat={est.p_hat:.5f} exact={float(exact):.5f} z={est.sigma_distance(exact):.2f}")

print()
print("P{Z_1 + ... + Z_n > 0} against p_{n-1} (r = d = 1)")
for n, alpha in [(1, "1/2"), (2, "3/10"), (5, "1/2"), (8, "7/10"), (20, "2/5")]:
    a = Fraction(alpha)
    exact = p_exact(DuelParams(a, n - 1, 1, 1))
    for scale in (1.0, 10.0):
        est = mc_double_exp(n, a, scale, SimConfig(trials, seed=7, workers=workers))
        print(f"  n={n:>2} alpha={alpha:>4} a={scale:>4}: p_hat={est.p_hat:.5f} "
              f"exact={float(exact):.5f} z={est.sigma_distance(exact):.2f}")
