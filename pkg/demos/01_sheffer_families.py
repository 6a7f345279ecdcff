"""
Sheffer families and their polynomials
======================================

Build the three builtin families, check the positivity conditions and
print the first few polynomial values.
"""

import numpy as np

from sheffer_szasz import builtin_family, make_family, sheffer_values, validate_family

# the builtins: Poisson weights, A(t) = e^t, and A(t) = t
for name in ("szasz", "example41", "example42"):
    fam = builtin_family(name)
    report = validate_family(fam)
    print(f"{name:10s} passed={report.passed} A(1)={fam.A1:.6f} A'(1)={fam.A1p:.6f} warnings={report.warnings}")

# p_k(2) for the Poisson family is 2^k / k!
print(np.round(sheffer_values(builtin_family("szasz"), 2.0, 6).values, 6))

# a genuinely non-Appell family: H(t) = t/2 + t^2/4
fam = make_family([1.0], [0.0, 0.5, 0.25], name="quadratic H")
print(fam.name, "H''(1) =", fam.H1pp, "passed:", validate_family(fam).passed)

# H(t) = 2t breaks the normalization H'(1) = 1
try:
    validate_family(make_family([1.0], [0.0, 2.0]))
except ValueError as err:
    print("rejected:", err)
