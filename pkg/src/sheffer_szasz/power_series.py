"""Truncated formal power series in one variable.

A :class:`TruncatedSeries` stores the Maclaurin coefficients ``c_0 .. c_K`` of
an analytic function. Only the operations needed to expand a Sheffer
generating relation ``A(t) * exp(x * H(t))`` are provided: addition,
scaling, the Cauchy product and the exponential.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_ORDER = 64


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients ``c_0 .. c_K`` of a power series truncated at order ``K``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_function(cls, coeff, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        """Build a series from a coefficient rule ``k -> c_k``."""
        return cls([coeff(k) for k in range(order + 1)])

    def truncate(self, order: int) -> "TruncatedSeries":
        """Return the series at ``order``, cutting or zero-padding as needed."""
        if order < 0:
            raise ValueError("order must be non-negative")
        if order <= self.order:
            return TruncatedSeries(self.coeffs[: order + 1])
        return TruncatedSeries(np.concatenate([self.coeffs, np.zeros(order - self.order)]))

    def scale(self, factor: float) -> "TruncatedSeries":
        return TruncatedSeries(factor * self.coeffs)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_add(self, other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(float(other))

    __rmul__ = __mul__

    def __len__(self):
        return self.coeffs.size

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={np.array2string(self.coeffs[:6])}...)"


def _as_series(a) -> TruncatedSeries:
    return a if isinstance(a, TruncatedSeries) else TruncatedSeries(a)


def series_add(a, b) -> TruncatedSeries:
    """Coefficient-wise sum; the shorter operand is zero-padded."""
    a, b = _as_series(a), _as_series(b)
    order = max(a.order, b.order)
    return TruncatedSeries(a.truncate(order).coeffs + b.truncate(order).coeffs)


def series_mul(a, b, order: int | None = None) -> TruncatedSeries:
    """Cauchy product truncated at ``order`` (default: the larger operand order)."""
    a, b = _as_series(a), _as_series(b)
    if order is None:
        order = max(a.order, b.order)
    prod = np.convolve(a.coeffs[: order + 1], b.coeffs[: order + 1])
    return TruncatedSeries(prod[: order + 1]).truncate(order)


def series_exp(a) -> TruncatedSeries:
    """Coefficients of ``exp(a(t))`` to the order of ``a``.

    Uses ``c_m = (1/m) sum_{j=1..m} j a_j c_{m-j}``; a nonzero constant term
    is factored out exactly as ``exp(a_0)``.
    """
    a = _as_series(a)
    K = a.order
    ja = np.arange(K + 1) * a.coeffs
    c = np.zeros(K + 1)
    c[0] = 1.0
    for m in range(1, K + 1):
        # c[m-1], ..., c[0] against j*a_j for j = 1..m
        c[m] = np.dot(ja[1 : m + 1], c[m - 1 :: -1]) / m
    return TruncatedSeries(np.exp(a.coeffs[0]) * c)


def series_eval_derivatives(a, t0: float, max_order: int) -> np.ndarray:
    """Values ``a(t0), a'(t0), ..., a^(max_order)(t0)`` of the truncated polynomial.

    The truncation order must be large enough for the tail at ``t0`` to be
    negligible; that is the caller's responsibility.
    """
    a = _as_series(a)
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    k = np.arange(a.order + 1, dtype=float)
    out = np.empty(max_order + 1)
    falling = np.ones_like(k)  # k (k-1) ... (k-d+1)
    for d in range(max_order + 1):
        if d > 0:
            falling = falling * (k - (d - 1))
        mask = k >= d
        out[d] = np.sum(falling[mask] * a.coeffs[mask] * t0 ** (k[mask] - d))
    return out
