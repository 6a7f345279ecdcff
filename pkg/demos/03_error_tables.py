"""
Error-bound tables
==================

The bound {1 + sqrt(1 + (b_n/n)(A' + A'')/A)} * omega(f, sqrt(b_n/n)) for
f(x) = -4x exp(-3x) on [0, 1] with b_n = sqrt(n). Only closed forms are
used, so n can go up to 1e19.
"""

from sheffer_szasz.cli import table_csv
from sheffer_szasz.config import RunConfig

ns = [10**k for k in range(1, 20, 2)]

for family in ("example41", "example42"):
    print(family)
    print(table_csv(RunConfig({"family": family, "n": ns})))

# the first modulus variant matters: the sup over all pairs gives a larger bound at small n
cfg = RunConfig({"family": "example41", "n": [10], "table_variant": "two_point"})
print(table_csv(cfg))
