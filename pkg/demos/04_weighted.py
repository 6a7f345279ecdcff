"""
Weighted approximation on the half-line
=======================================

With rho(x) = 1 + x^2 the modified operator reproduces rho^2 exactly, the
operator norm is controlled by closed-form moments, and the weighted error
for a bounded function sits well under its bound.
"""

import math

import numpy as np

from sheffer_szasz import OperatorConfig, builtin_family
from sheffer_szasz.operators import apply_P_star
from sheffer_szasz.weighted import bound_thm37, lemma33_bound, weighted_korovkin_deviation, weighted_modulus

fam = builtin_family("example41")
rho = lambda t: 1 + t * t

# rho^2 is a fixed point
cfg = OperatorConfig(100, 10.0)
for x in (0.0, 1.0, 3.0):
    print(x, apply_P_star(fam, cfg, rho, lambda t: rho(t) ** 2, x).value, rho(x) ** 2)

# operator norm against its bound
rep = lemma33_bound(fam, 10, math.sqrt(10))
print(f"||T*(rho)||_rho = {rep.measured:.6f} <= {rep.bound:.6f}")

# weighted Korovkin deviations along b_n = sqrt(n)
for i in range(3):
    print(f"e{i}", [round(weighted_korovkin_deviation(fam, n, math.sqrt(n), i), 6) for n in (100, 1000, 10**4)])

# the weighted modulus of rho itself at delta = 1 is 1/2
print("Omega(rho, 1) =", weighted_modulus(rho, delta=1.0))

# error bound for a bounded, increasing function
rep = bound_thm37(builtin_family("szasz"), 10**4, 100, lambda t: t / (1 + t), lhs_grid=np.linspace(0, 20, 81))
print(f"weighted error {rep.components['lhs']:.3e} <= bound {rep.bound:.3e}")
