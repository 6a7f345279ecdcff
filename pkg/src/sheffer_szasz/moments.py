"""Closed-form moments of ``T_n*`` and Korovkin-type convergence checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import ScalingSequence
from .sheffer import ShefferFamily


def _coefficients(fam: ShefferFamily) -> tuple[float, float, float]:
    """``A'(1)/A(1)``, ``(A(1) + 2A'(1) + A(1)H''(1)) / A(1)``, ``(A'(1) + A''(1)) / A(1)``."""
    first = fam.A1p / fam.A1
    linear = (fam.A1 + 2 * fam.A1p + fam.A1 * fam.H1pp) / fam.A1
    const = (fam.A1p + fam.A1pp) / fam.A1
    return first, linear, const


def moment_closed_form(fam: ShefferFamily, n, b_n: float, x: float, i: int) -> float:
    """``T_n*(e_i; x)`` for ``i`` in ``{0, 1, 2}``."""
    r = b_n / n
    first, linear, const = _coefficients(fam)
    if i == 0:
        return 1.0
    if i == 1:
        return x + r * first
    if i == 2:
        return x * x + r * linear * x + r * r * const
    raise ValueError("only moments of order 0, 1, 2 are available")


def first_central_moment(fam: ShefferFamily, n, b_n: float, x: float = 0.0) -> float:
    """``T_n*(e_1 - x; x) = (b_n / n) A'(1) / A(1)``; zero only when ``A'(1) = 0``."""
    return (b_n / n) * fam.A1p / fam.A1


def central_moment2(fam: ShefferFamily, n, b_n: float, x: float) -> float:
    """``T_n*((e_1 - x)^2; x) = (b_n/n)(1 + H''(1)) x + (b_n/n)^2 (A'(1) + A''(1)) / A(1)``."""
    r = b_n / n
    return r * (1.0 + fam.H1pp) * x + r * r * (fam.A1p + fam.A1pp) / fam.A1


def algebraic_c2(fam: ShefferFamily, n, b_n: float, x: float) -> float:
    """Second central moment expanded from the raw moments, ``m2 - 2 x m1 + x^2 m0``."""
    m0, m1, m2 = (moment_closed_form(fam, n, b_n, x, i) for i in range(3))
    return m2 - 2 * x * m1 + x * x * m0


@dataclass
class MomentSet:
    x: float
    n: float
    b_n: float
    m0: float
    m1: float
    m2: float
    c1: float
    c2: float
    c2_algebraic: float

    @classmethod
    def compute(cls, fam: ShefferFamily, n, b_n: float, x: float) -> "MomentSet":
        m = [moment_closed_form(fam, n, b_n, x, i) for i in range(3)]
        return cls(
            x=x,
            n=n,
            b_n=b_n,
            m0=m[0],
            m1=m[1],
            m2=m[2],
            c1=first_central_moment(fam, n, b_n, x),
            c2=central_moment2(fam, n, b_n, x),
            c2_algebraic=algebraic_c2(fam, n, b_n, x),
        )


def _sup_deviation(fam, n, b_n, a, i, grid_points=1001) -> float:
    r = b_n / n
    first, linear, const = _coefficients(fam)
    if i == 0:
        return 0.0
    if i == 1:
        return abs(r * first)
    if linear >= 0 and const >= 0:
        # increasing in x on [0, a]
        return r * linear * a + r * r * const
    xs = np.linspace(0.0, a, grid_points)
    return float(np.max(np.abs(r * linear * xs + r * r * const)))


@dataclass
class KorovkinReport:
    family: str
    a: float
    n: list
    deviations: dict = field(default_factory=dict)

    @property
    def monotone(self) -> bool:
        return all(
            all(b <= a_ + 1e-15 for a_, b in zip(devs, devs[1:])) for devs in self.deviations.values()
        )

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "a": self.a,
            "n": list(self.n),
            "deviations": {f"e{i}": list(v) for i, v in self.deviations.items()},
            "monotone": self.monotone,
        }


def korovkin_report(fam: ShefferFamily, scaling: ScalingSequence, a: float, n_list) -> KorovkinReport:
    """``sup_{[0, a]} |T_n*(e_i; x) - x^i|`` for ``i = 0, 1, 2`` along ``n_list``."""
    ns = list(n_list)
    if any(q <= p for p, q in zip(ns, ns[1:])):
        raise ValueError("n_list must be increasing")
    devs = {i: [_sup_deviation(fam, n, scaling(n), a, i) for n in ns] for i in range(3)}
    return KorovkinReport(fam.name, a, ns, devs)
