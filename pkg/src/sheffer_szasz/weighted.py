"""Weighted approximation on the half-line.

Weights ``rho`` satisfy ``rho(0) = 1`` and are increasing; the default is
``rho(x) = 1 + x^2``. Norms are ``||f||_rho = sup |f(x)| / rho(x)`` over a
finite grid, with a flag raised when the maximizer sits at the grid's end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .moments import _coefficients, moment_closed_form
from .operators import OperatorConfig, apply_P_star, as_target
from .sheffer import ShefferFamily
from .smoothness import BoundReport


@dataclass(frozen=True)
class WeightFunction:
    rho: Callable
    drho: Optional[Callable] = None
    inverse: Optional[Callable] = None
    name: str = "rho"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.rho(x), dtype=float), x.shape)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.drho is not None:
            return np.broadcast_to(np.asarray(self.drho(x), dtype=float), x.shape)
        eps = 1e-6
        return (self(x + eps) - self(np.maximum(x - eps, 0.0))) / (x + eps - np.maximum(x - eps, 0.0))

    def invert(self, v):
        """``rho^-1`` on ``[rho(0), inf)``; bisection unless an inverse is supplied."""
        v = np.asarray(v, dtype=float)
        if self.inverse is not None:
            return np.asarray(self.inverse(v), dtype=float)
        lo = np.zeros_like(v)
        hi = np.ones_like(v)
        while np.any(self(hi) < v):
            hi = np.where(self(hi) < v, 2 * hi, hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            below = self(mid) < v
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def as_function(self):
        return self.rho


def default_weight() -> WeightFunction:
    return WeightFunction(
        rho=lambda x: 1.0 + x * x,
        drho=lambda x: 2.0 * x,
        inverse=lambda v: np.sqrt(np.maximum(v - 1.0, 0.0)),
        name="1+x^2",
    )


def check_weight(rho: WeightFunction, grid=None) -> dict:
    """Scan ``rho(0) = 1``, monotonicity and ``inf rho' >= 1`` on a grid."""
    grid = np.linspace(0.0, 20.0, 2001) if grid is None else np.asarray(grid, dtype=float)
    rho0 = float(rho(np.array([0.0]))[0])
    d = rho.derivative(grid)
    report = {
        "rho0": rho0,
        "rho0_ok": abs(rho0 - 1.0) <= 1e-12,
        "increasing": bool(np.all(np.diff(rho(grid)) > 0)),
        "min_derivative": float(np.min(d)),
        "derivative_ok": bool(np.min(d) >= 1.0 - 1e-12),
    }
    report["passed"] = report["rho0_ok"] and report["increasing"] and report["derivative_ok"]
    return report


@dataclass
class WeightedNorm:
    value: float
    x_at: float
    tail: bool

    def __float__(self):
        return self.value


def weighted_norm(f, rho=None, X_max: float = 1000.0, grid_points: int = 100_000) -> WeightedNorm:
    """Grid sup of ``|f| / rho`` on ``[0, X_max]``; ``tail`` when the maximizer is within 1% of ``X_max``."""
    rho = rho or default_weight()
    xs = np.linspace(0.0, X_max, grid_points)
    r = np.asarray(rho(xs), dtype=float)
    if np.any(r <= 0):
        raise ValueError("weight must be positive on the grid")
    ratio = np.abs(as_target(f)(xs)) / r
    i = int(np.argmax(ratio))
    return WeightedNorm(float(ratio[i]), float(xs[i]), bool(xs[i] >= 0.99 * X_max))


@dataclass
class Lemma33Report:
    bound: float
    measured: float
    holds: bool


def lemma33_bound(fam: ShefferFamily, n, b_n, X_max: float = 1000.0, grid_points: int = 100_000) -> Lemma33Report:
    """``1 + (b_n/n)(A + 2A' + A H'')/A + (b_n/n)^2 (A' + A'')/A`` against ``||T_n*(rho)||_rho``."""
    r = b_n / n
    _, linear, const = _coefficients(fam)
    bound = 1.0 + r * linear + r * r * const

    def t_rho(x):
        return moment_closed_form(fam, n, b_n, x, 0) + moment_closed_form(fam, n, b_n, x, 2)

    measured = weighted_norm(t_rho, default_weight(), X_max, grid_points).value
    return Lemma33Report(bound, measured, measured <= bound + 1e-8)


def weighted_korovkin_deviation(fam: ShefferFamily, n, b_n, i: int, rho=None,
                                X_max: float = 1000.0, grid_points: int = 100_000) -> float:
    """``||T_n*(e_i) - e_i||_rho`` from the closed-form moments."""
    return weighted_norm(
        lambda x: moment_closed_form(fam, n, b_n, x, i) - x**i, rho, X_max, grid_points
    ).value


def weighted_modulus(f, rho=None, delta: float = 1.0, x_range=(0.0, 20.0), x_points: int = 2000,
                     t_points: int = 200) -> float:
    """``sup |f(t) - f(x)| / ((|rho(t) - rho(x)| + 1) rho(x))`` over ``|rho(t) - rho(x)| <= delta``.

    For each ``x`` the admissible ``t`` form an interval found by inverting
    the increasing weight.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    rho = rho or default_weight()
    f = as_target(f)
    xs = np.linspace(*x_range, x_points)
    rx = rho(xs)
    r0 = float(rho(np.array([0.0]))[0])
    lo = rho.invert(np.maximum(rx - delta, r0))
    hi = rho.invert(rx + delta)
    frac = np.linspace(0.0, 1.0, t_points)
    ts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    ts = np.maximum(ts, 0.0)
    dr = np.abs(rho(ts) - rx[:, None])
    ok = dr <= delta * (1 + 1e-12)
    ratio = np.abs(f(ts) - f(xs)[:, None]) / ((dr + 1.0) * rx[:, None])
    return float(np.max(np.where(ok, ratio, 0.0)))


@dataclass
class WeightedSequenceTriple:
    alpha_n: float
    beta_n: float
    gamma_n: float


def theorem37_quantities(fam: ShefferFamily, n, b_n) -> WeightedSequenceTriple:
    r = b_n / n
    first, linear, const = _coefficients(fam)
    return WeightedSequenceTriple(r * linear + r * r * const, r * first, 0.0)


def bound_thm37(fam: ShefferFamily, n, b_n, f, rho=None, psi=None, lhs_grid=None,
                cfg: OperatorConfig | None = None, compute_lhs: bool = True) -> BoundReport:
    """``16 Omega_rho(f, sqrt(alpha_n + 2 beta_n)) + alpha_n ||f||_rho`` and the measured left side.

    The left side ``sup |P_n*(f; x) - f(x)| / (rho^4 psi)(x)`` is sampled on
    ``lhs_grid`` (default 201 points on ``[0, 20]``).
    """
    rho = rho or default_weight()
    psi = as_target(psi or (lambda x: 1.0 + x * x))
    f = as_target(f)
    q = theorem37_quantities(fam, n, b_n)
    step = math.sqrt(max(q.alpha_n + 2 * q.beta_n, 0.0))
    omega = weighted_modulus(f, rho, step) if step > 0 else 0.0
    norm_f = weighted_norm(f, rho).value
    bound = 16.0 * omega + q.alpha_n * norm_f
    components = {
        "alpha_n": q.alpha_n,
        "beta_n": q.beta_n,
        "gamma_n": q.gamma_n,
        "delta": step,
        "weighted_modulus": omega,
        "norm_rho": norm_f,
    }
    if compute_lhs:
        cfg = cfg or OperatorConfig(n=n, b_n=b_n)
        xs = np.linspace(0.0, 20.0, 201) if lhs_grid is None else np.asarray(lhs_grid, dtype=float)
        pv = np.array([apply_P_star(fam, cfg, rho, f, float(x)).value for x in xs])
        weight = rho(xs) ** 4 * psi(xs)
        err = np.abs(pv - f(xs)) / weight
        components["lhs"] = float(np.max(err))
        components["lhs_x"] = float(xs[int(np.argmax(err))])
    return BoundReport("T3_7", bound, components, {"family": fam.name, "n": n, "b_n": b_n, "rho": rho.name})
