"""
Convergence of the Chlodowsky-type operators
============================================

Evaluate T_n* on f(x) = -4x exp(-3x) over [0, 1] with b_n = sqrt(n) and
watch the sup error shrink. The CSV written by ``sheffer-szasz converge``
holds the same numbers for plotting.
"""

import math

import numpy as np

from sheffer_szasz import OperatorConfig, builtin_family, eval_grid
from sheffer_szasz.config import paper_f

xs = np.linspace(0.0, 1.0, 101)

for name in ("example41", "example42"):
    fam = builtin_family(name)
    errors = []
    for n in (10, 50, 100, 200, 300):
        values = eval_grid(fam, OperatorConfig(n, math.sqrt(n)), paper_f, xs)
        errors.append(max(abs(v - paper_f(x)) for x, v, _ in values))
    print(name, " ".join(f"{e:.4f}" for e in errors))

# the first moment shows why the shifted family converges more slowly near 0
fam = builtin_family("example41")
cfg = OperatorConfig(100, 10.0)
print("T*(e1; 0) =", eval_grid(fam, cfg, lambda t: t, [0.0])[0][1], "(b_n/n = 0.1)")
