"""Moduli of smoothness, Steklov means and the local error bounds for ``T_n*``.

All suprema are taken over finite grids. The first modulus comes in two
flavours:

* ``two_point``: ``sup |f(x) - f(y)|`` over ``|x - y| <= delta`` in the interval;
* ``exact_increment``: ``sup |f(x + delta) - f(x)|`` over ``x`` in ``[a0, a1 - delta]``.

The error tables for ``f(x) = -4 x exp(-3x)`` are reproduced by the
``exact_increment`` variant on ``[0, 1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .moments import algebraic_c2
from .operators import as_target
from .sheffer import ShefferFamily

VARIANTS = ("two_point", "exact_increment")
DEFAULT_GRID = 2001
TABLE_GRID = 20001
DEFAULT_X_MAX = 50.0


class EmptyDomainError(ValueError):
    """The step is too large for the interval."""


@dataclass
class ModulusReport:
    delta: float
    value: float
    variant: str
    interval: tuple
    grid_points: int

    def __float__(self):
        return self.value


def _window_max(v: np.ndarray, width: int) -> np.ndarray:
    """``max(v[i : i + width + 1])`` for every ``i`` with a full window (sparse table)."""
    n_out = v.size - width
    if width == 0:
        return v.copy()
    levels = [v]
    span = 1
    while 2 * span <= width + 1:
        prev = levels[-1]
        levels.append(np.maximum(prev[:-span], prev[span:]))
        span *= 2
    top = levels[-1]
    return np.maximum(top[:n_out], top[width + 1 - span : width + 1 - span + n_out])


def _base_grid(interval, grid_points):
    a0, a1 = map(float, interval)
    if not a1 > a0:
        raise ValueError("interval must be nondegenerate")
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    return a0, a1, np.linspace(a0, a1, grid_points)


def _increment_points(xs, upper):
    pts = xs[xs <= upper]
    if pts.size == 0 or pts[-1] < upper:
        pts = np.append(pts, upper)
    return pts


def modulus(f, delta: float, interval=(0.0, 1.0), variant: str = "two_point", grid_points: int = DEFAULT_GRID):
    """First modulus of continuity of ``f`` on ``interval``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if variant not in VARIANTS:
        raise ValueError(f"unknown modulus variant {variant!r}")
    f = as_target(f)
    a0, a1, xs = _base_grid(interval, grid_points)
    length = a1 - a0

    exact = None
    if delta <= length * (1 + 1e-12):
        pts = _increment_points(xs, max(a0, a1 - delta))
        exact = float(np.max(np.abs(f(np.minimum(pts + delta, a1)) - f(pts))))
    if variant == "exact_increment":
        if exact is None:
            raise EmptyDomainError(f"delta={delta:g} exceeds the interval length {length:g}")
        value = exact
    else:
        fv = f(xs)
        step = length / (grid_points - 1)
        width = min(int(math.floor(delta / step + 1e-9)), grid_points - 1)
        spread = _window_max(fv, width) + _window_max(-fv, width)
        value = float(np.max(spread))
        if exact is not None:
            value = max(value, exact)
    return ModulusReport(float(delta), value, variant, (a0, a1), int(grid_points))


def second_modulus(f, delta: float, interval=(0.0, 1.0), grid_points: int = DEFAULT_GRID, t_points: int = 201):
    """``sup_{0 < t <= delta} sup_x |f(x + 2t) - 2 f(x + t) + f(x)|`` with ``x`` in ``[a0, a1 - 2t]``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    f = as_target(f)
    a0, a1, xs = _base_grid(interval, grid_points)
    if 2 * delta > (a1 - a0) * (1 + 1e-12):
        raise EmptyDomainError(f"2*delta={2 * delta:g} exceeds the interval length {a1 - a0:g}")
    best = 0.0
    for t in np.linspace(delta / t_points, delta, t_points):
        pts = _increment_points(xs, max(a0, a1 - 2 * t))
        d2 = f(np.minimum(pts + 2 * t, a1)) - 2 * f(pts + t) + f(pts)
        best = max(best, float(np.max(np.abs(d2))))
    return ModulusReport(float(delta), best, "second_order", (a0, a1), int(grid_points))


def _linear_extension(f, interval):
    a0, a1 = map(float, interval)
    eta = 1e-6 * (a1 - a0)
    f0, f1 = float(f(np.array([a0]))[0]), float(f(np.array([a1]))[0])
    s0 = (float(f(np.array([a0 + eta]))[0]) - f0) / eta
    s1 = (f1 - float(f(np.array([a1 - eta]))[0])) / eta

    def extended(x):
        x = np.asarray(x, dtype=float)
        inner = f(np.clip(x, a0, a1))
        return np.where(x < a0, f0 + s0 * (x - a0), np.where(x > a1, f1 + s1 * (x - a1), inner))

    return extended


def steklov(f, h: float, x, quadrature_points: int = 64, interval=None):
    """Second-order Steklov mean ``f_h(x)``.

    ``f_h(x) = h^-2 int int_{[-h/2, h/2]^2} [2 f(x + s + t) - f(x + 2(s + t))] ds dt``,
    evaluated with tensor Gauss-Legendre quadrature. With ``interval`` given,
    ``f`` is continued linearly outside it.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    f = as_target(f)
    g = _linear_extension(f, interval) if interval is not None else f
    nodes, weights = np.polynomial.legendre.leggauss(quadrature_points)
    s = 0.5 * h * nodes
    u = (s[:, None] + s[None, :]).ravel()
    w = (0.25 * np.outer(weights, weights)).ravel()  # (h/2)^2 / h^2
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    vals = np.array([np.dot(w, 2 * g(xi + u) - g(xi + 2 * u)) for xi in x_arr])
    return float(vals[0]) if np.ndim(x) == 0 else vals


def steklov_defect(f, h: float, interval=(0.0, 1.0), grid_points: int = 201) -> dict:
    """Empirical check of ``||f_h - f|| <= (3/4) omega_2(f, h)`` on a grid of the interval."""
    f = as_target(f)
    xs = np.linspace(*interval, grid_points)
    diff = float(np.max(np.abs(steklov(f, h, xs, interval=interval) - f(xs))))
    w2 = second_modulus(f, h, interval).value
    return {"h": h, "sup_diff": diff, "bound": 0.75 * w2, "holds": diff <= 0.75 * w2 + 1e-12}


@dataclass
class BoundReport:
    theorem: str
    bound: float
    components: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "bound": self.bound, "components": dict(self.components), "config": dict(self.config)}


def _grid_norm(f, interval, grid_points=DEFAULT_GRID) -> float:
    return float(np.max(np.abs(as_target(f)(np.linspace(*interval, grid_points)))))


def bound_thm26(fam: ShefferFamily, n, b_n, f, a: float = 1.0, modulus_variant: str = "two_point",
                grid_points: int = DEFAULT_GRID) -> BoundReport:
    """``{1 + sqrt((1 + H''(1)) a + (b_n/n)(A'(1) + A''(1))/A(1))} omega(f, sqrt(b_n/n))`` on ``[0, a]``."""
    r = b_n / n
    radicand = (1 + fam.H1pp) * a + r * (fam.A1p + fam.A1pp) / fam.A1
    factor = 1.0 + math.sqrt(radicand)
    delta = math.sqrt(r)
    omega = modulus(f, delta, (0.0, a), modulus_variant, grid_points).value
    return BoundReport(
        "T2_6",
        factor * omega,
        {"factor": factor, "delta": delta, "modulus": omega},
        {"family": fam.name, "n": n, "b_n": b_n, "a": a, "variant": modulus_variant, "grid_points": grid_points},
    )


def bound_thm27(fam: ShefferFamily, n, b_n, f, a: float, x: float, grid_points: int = DEFAULT_GRID) -> BoundReport:
    """``(2/a) ||f|| h^2 + (3/4)(a + 2 + h^2) omega_2(f, h)`` with ``h = T_n*((e_1 - x)^2; x)^(1/4)``.

    ``omega_2`` is taken on ``[0, a + 2h]`` so every step ``t <= h`` keeps the
    full range ``x in [0, a]``.
    """
    c2 = max(algebraic_c2(fam, n, b_n, x), 0.0)
    h = c2**0.25
    norm = _grid_norm(f, (0.0, a), grid_points)
    w2 = second_modulus(f, h, (0.0, a + 2 * h), grid_points).value if h > 0 else 0.0
    bound = (2.0 / a) * norm * h * h + 0.75 * (a + 2 + h * h) * w2
    return BoundReport(
        "T2_7",
        bound,
        {"h": h, "norm": norm, "modulus2": w2},
        {"family": fam.name, "n": n, "b_n": b_n, "a": a, "x": x},
    )


def estimate_cb2_norms(f, x_max: float = DEFAULT_X_MAX, grid_points: int = 50001) -> tuple[float, float, float]:
    """Grid estimates of ``||f||``, ``||f'||``, ``||f''||`` on ``[0, x_max]``."""
    xs = np.linspace(0.0, x_max, grid_points)
    fv = as_target(f)(xs)
    d1 = np.gradient(fv, xs, edge_order=2)
    d2 = np.gradient(d1, xs, edge_order=2)
    return float(np.max(np.abs(fv))), float(np.max(np.abs(d1))), float(np.max(np.abs(d2)))


def bound_thm28(fam: ShefferFamily, n, b_n, f_norms=None, x: float = 0.0, f=None,
                x_max: float = DEFAULT_X_MAX) -> BoundReport:
    """``gamma_n(x) (||f|| + ||f'|| + ||f''||)`` with ``gamma_n(x) = T_n*((e_1 - x)^2; x) / 2``."""
    if f_norms is None:
        if f is None:
            raise ValueError("supply either the three norms or the function")
        f_norms = estimate_cb2_norms(f, x_max)
    gamma = 0.5 * algebraic_c2(fam, n, b_n, x)
    total = float(sum(f_norms))
    return BoundReport(
        "T2_8",
        gamma * total,
        {"gamma": gamma, "norm_C_B2": total, "norms": list(map(float, f_norms))},
        {"family": fam.name, "n": n, "b_n": b_n, "x": x},
    )


def bound_thm29(fam: ShefferFamily, n, b_n, f, x: float, M: float = 1.0,
                interval=(0.0, DEFAULT_X_MAX), grid_points: int = DEFAULT_GRID) -> BoundReport:
    """``2M {omega_2(f, sqrt(delta)) + min(1, delta) ||f||}`` with ``delta = gamma_n(x) / 4``.

    ``M`` is the unspecified constant relating the K-functional to the second
    modulus; it is reported as given.
    """
    gamma = 0.5 * algebraic_c2(fam, n, b_n, x)
    delta = max(gamma, 0.0) / 4.0
    step = math.sqrt(delta)
    w2 = second_modulus(f, step, interval, grid_points).value if step > 0 else 0.0
    norm = _grid_norm(f, interval, grid_points)
    bound = 2.0 * M * (w2 + min(1.0, delta) * norm)
    return BoundReport(
        "T2_9",
        bound,
        {"gamma": gamma, "delta": delta, "modulus2": w2, "norm": norm, "M": M},
        {"family": fam.name, "n": n, "b_n": b_n, "x": x, "interval": list(interval)},
    )
