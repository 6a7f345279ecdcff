"""Sheffer families ``(A, H)`` and the polynomials ``p_k`` they generate.

The generating relation is ``A(t) exp(x H(t)) = sum_k p_k(x) t^k``. A family
is usable for the operators when ``H'(1) = 1``, ``A(1) != 0`` and
``p_k(x) >= 0`` on ``[0, inf)``; the last condition is only scanned on a grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .power_series import (
    DEFAULT_ORDER,
    TruncatedSeries,
    series_eval_derivatives,
    series_exp,
    series_mul,
)

H_PRIME_TOL = 1e-9
A1_TOL = 1e-12
DEFAULT_SCAN_GRID = tuple(np.round(np.arange(0, 101) * 0.1, 10))
DEFAULT_SCAN_ORDER = 128


class FamilyError(ValueError):
    """Raised when a family violates the hard conditions on ``A`` and ``H``."""


@dataclass(frozen=True, eq=False)
class ShefferFamily:
    """A Sheffer pair with its values at ``t = 1`` cached.

    ``a_rule`` / ``h_rule`` optionally give exact coefficients for any order,
    so builtin families do not lose accuracy when a sum needs more terms than
    the stored truncation. Families built from explicit arrays are treated
    as polynomials beyond their last coefficient.
    """

    A: TruncatedSeries
    H: TruncatedSeries
    name: str = "custom"
    a_rule: Optional[Callable[[int], float]] = field(default=None, repr=False)
    h_rule: Optional[Callable[[int], float]] = field(default=None, repr=False)

    def __post_init__(self):
        a = series_eval_derivatives(self.A, 1.0, 2)
        h = series_eval_derivatives(self.H, 1.0, 2)
        object.__setattr__(self, "_a_vals", a)
        object.__setattr__(self, "_h_vals", h)
        object.__setattr__(self, "_cache", {})

    @property
    def A1(self) -> float:
        return float(self._a_vals[0])

    @property
    def A1p(self) -> float:
        return float(self._a_vals[1])

    @property
    def A1pp(self) -> float:
        return float(self._a_vals[2])

    @property
    def H1(self) -> float:
        return float(self._h_vals[0])

    @property
    def H1p(self) -> float:
        return float(self._h_vals[1])

    @property
    def H1pp(self) -> float:
        return float(self._h_vals[2])

    def series(self, order: int) -> tuple[TruncatedSeries, TruncatedSeries]:
        """``(A, H)`` at the requested order."""
        if order in self._cache:
            return self._cache[order]
        A = TruncatedSeries.from_function(self.a_rule, order) if self.a_rule else self.A.truncate(order)
        H = TruncatedSeries.from_function(self.h_rule, order) if self.h_rule else self.H.truncate(order)
        if len(self._cache) < 64:
            self._cache[order] = (A, H)
        return A, H

    def effective_a(self, order: int) -> np.ndarray:
        """Coefficients of ``A`` up to ``order`` with negligible trailing entries dropped."""
        c = self.series(order)[0].coeffs
        nz = np.flatnonzero(np.abs(c) > 1e-300 * max(1.0, np.max(np.abs(c))))
        return c[: nz[-1] + 1] if nz.size else c[:1]

    def effective_h(self, order: int) -> np.ndarray:
        c = self.series(order)[1].coeffs
        nz = np.flatnonzero(c != 0.0)
        return c[: nz[-1] + 1] if nz.size else c[:1]

    def is_appell(self) -> bool:
        """True when ``H(t) = t`` exactly."""
        h = self.effective_h(self.H.order)
        return h.size == 2 and h[0] == 0.0 and h[1] == 1.0


@dataclass
class ShefferValues:
    x: float
    values: np.ndarray


@dataclass
class ValidationReport:
    family: str
    h_prime: float
    a1: float
    positivity_ok: bool
    min_value: float
    negative_at: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.positivity_ok

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "passed": self.passed,
            "H_prime_1": self.h_prime,
            "A_1": self.a1,
            "positivity_ok": self.positivity_ok,
            "min_value": self.min_value,
            "negative_at": [list(p) for p in self.negative_at[:20]],
            "warnings": list(self.warnings),
        }


def sheffer_values(fam: ShefferFamily, x: float, K: int) -> ShefferValues:
    """``p_0(x) .. p_K(x)`` as the coefficients of ``A(t) exp(x H(t))``."""
    if K < 0:
        raise ValueError("K must be non-negative")
    A, H = fam.series(K)
    p = series_mul(A, series_exp(H.scale(x)), order=K)
    return ShefferValues(float(x), p.coeffs.copy())


def validate_family(
    fam: ShefferFamily,
    scan_grid: Sequence[float] = DEFAULT_SCAN_GRID,
    scan_order: int = DEFAULT_SCAN_ORDER,
) -> ValidationReport:
    """Check the structural conditions and scan ``p_k(x) >= 0`` on a grid.

    Raises :class:`FamilyError` when ``H'(1) != 1``, ``A(1) = 0`` or ``H`` has
    a nonzero constant term / vanishing linear term. A vanishing ``a_0`` only
    produces a warning.
    """
    if abs(fam.H1p - 1.0) > H_PRIME_TOL:
        raise FamilyError(f"H'(1) = {fam.H1p:.12g}, expected 1")
    if abs(fam.A1) <= A1_TOL:
        raise FamilyError(f"A(1) = {fam.A1:.3g} vanishes")
    if fam.H.coeffs[0] != 0.0:
        raise FamilyError(f"H must have zero constant term, got h_0 = {fam.H.coeffs[0]:.6g}")
    if fam.H.order < 1 or fam.H.coeffs[1] == 0.0:
        raise FamilyError("H must have a nonzero linear coefficient h_1")

    notes = []
    if fam.A.coeffs[0] == 0.0:
        notes.append("a_0 = 0: A has a vanishing constant term")

    negative = []
    min_value = math.inf
    for x in scan_grid:
        p = sheffer_values(fam, float(x), scan_order).values
        if not np.all(np.isfinite(p)):
            negative.append((float(x), -1, math.nan))
            continue
        floor = -1e-12 * max(1.0, float(np.max(np.abs(p))))
        min_value = min(min_value, float(np.min(p)))
        for k in np.flatnonzero(p < floor):
            negative.append((float(x), int(k), float(p[k])))
    return ValidationReport(
        family=fam.name,
        h_prime=fam.H1p,
        a1=fam.A1,
        positivity_ok=not negative,
        min_value=min_value,
        negative_at=negative,
        warnings=notes,
    )


def _exp_rule(k: int) -> float:
    return 1.0 / math.factorial(k) if k <= 170 else 0.0


def _identity_rule(k: int) -> float:
    return 1.0 if k == 1 else 0.0


def _one_rule(k: int) -> float:
    return 1.0 if k == 0 else 0.0


def make_family(A, H, name: str = "custom", order: int | None = None) -> ShefferFamily:
    """Family from explicit coefficient arrays (polynomial beyond the last entry)."""
    A = A if isinstance(A, TruncatedSeries) else TruncatedSeries(A)
    H = H if isinstance(H, TruncatedSeries) else TruncatedSeries(H)
    if order is not None:
        A, H = A.truncate(order), H.truncate(order)
    return ShefferFamily(A, H, name=name)


def appell_family(g, name: str = "appell") -> ShefferFamily:
    """Appell family ``g(t) exp(x t)``: ``H(t) = t`` with a user-supplied ``g``."""
    g = g if isinstance(g, TruncatedSeries) else TruncatedSeries(g)
    order = max(g.order, 1)
    return ShefferFamily(
        g.truncate(order),
        TruncatedSeries.from_function(_identity_rule, order),
        name=name,
        h_rule=_identity_rule,
    )


def builtin_family(name: str, g=None, order: int = DEFAULT_ORDER) -> ShefferFamily:
    """Catalog: ``szasz``, ``example41`` (``A = e^t``), ``example42`` (``A = t``), ``appell``."""
    key = name.lower()
    if key == "szasz":
        a_rule = _one_rule
    elif key == "example41":
        a_rule = _exp_rule
    elif key == "example42":
        a_rule = _identity_rule
    elif key == "appell":
        if g is None:
            raise FamilyError("appell family needs a g series")
        return appell_family(g)
    else:
        raise FamilyError(f"unknown family {name!r}")
    return ShefferFamily(
        TruncatedSeries.from_function(a_rule, order),
        TruncatedSeries.from_function(_identity_rule, order),
        name=key,
        a_rule=a_rule,
        h_rule=_identity_rule,
    )


BUILTIN_NAMES = ("szasz", "example41", "example42")

