"""The operators ``T_n``, their Chlodowsky variant ``T_n*`` and the weighted ``P_n*``.

All three share the weight system

    w_k(y) = exp(-y H(1)) p_k(y) / A(1),     sum_k w_k(y) = 1,

evaluated at ``y = n x`` (``T_n``) or ``y = (n / b_n) x`` (``T_n*``, ``P_n*``)
and paired with the nodes ``k / n`` or ``k b_n / n``. Sums are truncated by a
joint rule on the accumulated weight and the size of the current term.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .sheffer import ShefferFamily

LOG_SPACE_THRESHOLD = 700.0
_RESCALE_AT = 1e250


class TruncationError(RuntimeError):
    """The infinite sum could not be truncated within ``max_terms`` terms."""

    def __init__(self, message, x=None, n=None):
        super().__init__(message)
        self.x = x
        self.n = n


@dataclass(frozen=True)
class OperatorConfig:
    n: int
    b_n: float = 1.0
    tail_epsilon: float = 1e-12
    max_terms: int = 100_000

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not self.b_n > 0:
            raise ValueError("b_n must be positive")
        if not 0 < self.tail_epsilon < 1:
            raise ValueError("tail_epsilon must lie in (0, 1)")

    @property
    def ratio(self) -> float:
        """The node spacing ``b_n / n``."""
        return self.b_n / self.n


@dataclass(frozen=True)
class ScalingSequence:
    """Chlodowsky scale ``b_n``: ``sqrt``, ``power`` (``n**p``, ``0 < p < 1``), ``linear`` or ``table``."""

    rule: str = "sqrt"
    power: float = 0.5
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rule not in ("sqrt", "power", "linear", "table"):
            raise ValueError(f"unknown scaling rule {self.rule!r}")
        if self.rule == "power" and not 0 < self.power < 1:
            raise ValueError("power rule needs 0 < p < 1")

    def __call__(self, n) -> float:
        if self.rule == "sqrt":
            return math.sqrt(n)
        if self.rule == "power":
            return float(n) ** self.power
        if self.rule == "linear":
            return float(n)
        try:
            return float(self.table[int(n)])
        except KeyError:
            raise ValueError(f"no tabulated b_n for n={n}") from None

    def check(self, n_values: Sequence[int]) -> dict:
        """Empirical check of ``b_n`` increasing to infinity with ``b_n / n`` decreasing to 0."""
        ns = sorted(set(int(n) for n in n_values))
        b = np.array([self(n) for n in ns])
        r = b / np.array(ns, dtype=float)
        positive = bool(np.all(b > 0))
        increasing = bool(np.all(np.diff(b) > 0)) if len(ns) > 1 else True
        ratio_decreasing = bool(np.all(np.diff(r) < 0)) if len(ns) > 1 else bool(r[0] < 1)
        return {
            "n": ns,
            "b_n": b.tolist(),
            "ratio": r.tolist(),
            "positive": positive,
            "increasing": increasing,
            "ratio_decreasing": ratio_decreasing,
            "passed": positive and increasing and ratio_decreasing,
        }

    def describe(self) -> str:
        if self.rule == "power":
            return f"power:{self.power:g}"
        if self.rule == "table":
            return "table:" + ",".join(f"{k}={v:g}" for k, v in sorted(self.table.items()))
        return self.rule


@dataclass(frozen=True)
class TargetFunction:
    """A function on ``[0, inf)``, evaluated on numpy arrays.

    ``envelope = (alpha, beta)`` asserts ``|f(x)| <= beta * exp(alpha * x)``.
    """

    evaluator: Callable
    envelope: Optional[tuple] = None
    name: str = "f"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(self.evaluator(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).copy()
        return y

    def check_envelope(self, grid=None) -> bool:
        if self.envelope is None:
            return True
        alpha, beta = self.envelope
        grid = np.linspace(0, 20, 401) if grid is None else np.asarray(grid, dtype=float)
        return bool(np.all(np.abs(self(grid)) <= beta * np.exp(alpha * grid) * (1 + 1e-12)))


def as_target(f) -> TargetFunction:
    return f if isinstance(f, TargetFunction) else TargetFunction(f)


@dataclass
class Evaluation:
    value: float
    tail: float
    terms: int


def _exp_coefficients(h: np.ndarray, y: float, K: int) -> tuple[np.ndarray, float]:
    """Coefficients of ``exp(y H(t))`` up to ``t^K`` as ``(c, log_scale)``.

    The true coefficients are ``c * exp(log_scale)``; ``c`` is renormalized
    whenever it grows past ``1e250`` so the recurrence never overflows.
    """
    d = h.size - 1
    jh = (np.arange(d + 1) * h * y)[1:].tolist()
    c = [0.0] * (K + 1)
    c[0] = 1.0
    log_scale = 0.0
    for m in range(1, K + 1):
        s = 0.0
        for j in range(1, min(m, d) + 1):
            s += jh[j - 1] * c[m - j]
        s /= m
        c[m] = s
        if abs(s) > _RESCALE_AT:
            for i in range(m + 1):
                c[i] /= _RESCALE_AT
            log_scale += math.log(_RESCALE_AT)
    return np.array(c), log_scale


def sheffer_weights(fam: ShefferFamily, y: float, K: int) -> np.ndarray:
    """``w_k = exp(-y H(1)) p_k(y) / A(1)`` for ``k = 0..K`` (log-space for large ``y H(1)``)."""
    if y < 0:
        raise ValueError("operators are defined for x >= 0")
    h = fam.effective_h(K)
    a = fam.effective_a(K)
    if y == 0.0:
        c, log_scale = np.zeros(K + 1), 0.0
        c[0] = 1.0
    else:
        c, log_scale = _exp_coefficients(h, y, K)
    p = np.convolve(a, c)[: K + 1]
    if p.size < K + 1:
        p = np.concatenate([p, np.zeros(K + 1 - p.size)])
    shift = log_scale - y * fam.H1
    if y * fam.H1 <= LOG_SPACE_THRESHOLD and abs(log_scale) < 1.0:
        return p * math.exp(shift) / fam.A1
    with np.errstate(divide="ignore"):
        logw = np.log(np.abs(p)) + shift - math.log(abs(fam.A1))
    return np.sign(p) * math.copysign(1.0, fam.A1) * np.exp(logw)


def _initial_terms(fam: ShefferFamily, y: float) -> int:
    mean = y * max(fam.H1p, 1.0) + abs(fam.A1p / fam.A1)
    return int(mean + 12.0 * math.sqrt(mean + 1.0) + 40)


def _summed(fam, y, node_step, f, cfg: OperatorConfig, x, transform=None) -> Evaluation:
    if y > cfg.max_terms:
        raise TruncationError(
            f"central index {y:.3g} exceeds max_terms={cfg.max_terms} (n={cfg.n}, x={x})", x=x, n=cfg.n
        )
    eps = cfg.tail_epsilon
    # log-space weights carry absolute log error ~ machine eps * y H(1)
    mass_eps = max(eps, 64 * 2.0**-53 * (1.0 + abs(y * fam.H1)))
    K = min(_initial_terms(fam, y), cfg.max_terms)
    while True:
        w = sheffer_weights(fam, y, K)
        nodes = node_step * np.arange(K + 1)
        fv = f(nodes)
        if transform is not None:
            fv = transform(nodes, fv)
        terms = w * fv
        cum_w = np.cumsum(w)
        cum_s = np.cumsum(terms)
        ok = (cum_w >= 1.0 - mass_eps) & (np.abs(terms) < eps * (1.0 + np.abs(cum_s)))
        hit = np.flatnonzero(ok)
        if hit.size:
            k = int(hit[0])
            return Evaluation(float(np.sum(terms[: k + 1])), float(1.0 - cum_w[k]), k + 1)
        if K >= cfg.max_terms:
            raise TruncationError(
                f"no truncation within max_terms={cfg.max_terms} (n={cfg.n}, x={x})", x=x, n=cfg.n
            )
        K = min(2 * K, cfg.max_terms)


def apply_T(fam: ShefferFamily, n: int, f, x: float, cfg: OperatorConfig | None = None) -> Evaluation:
    """``T_n(f; x)``: weights at ``y = n x`` against ``f(k / n)``."""
    cfg = cfg or OperatorConfig(n=n)
    cfg = OperatorConfig(n=n, b_n=1.0, tail_epsilon=cfg.tail_epsilon, max_terms=cfg.max_terms)
    return _summed(fam, n * x, 1.0 / n, as_target(f), cfg, x)


def apply_T_star(fam: ShefferFamily, cfg: OperatorConfig, f, x: float) -> Evaluation:
    """``T_n*(f; x)``: weights at ``y = (n / b_n) x`` against ``f(k b_n / n)``."""
    return _summed(fam, x / cfg.ratio, cfg.ratio, as_target(f), cfg, x)


def apply_P_star(fam: ShefferFamily, cfg: OperatorConfig, rho, f, x: float) -> Evaluation:
    """``P_n*(f; x) = rho(x)^2 sum_k w_k f(t_k) / rho(t_k)^2`` with ``t_k = k b_n / n``."""
    rho = as_target(rho)

    def divide(nodes, fv):
        r = rho(nodes)
        if np.any(r == 0):
            raise ZeroDivisionError("weight function vanishes at a sample node")
        return fv / r**2

    ev = _summed(fam, x / cfg.ratio, cfg.ratio, as_target(f), cfg, x, transform=divide)
    r2 = float(rho(np.array([x]))[0]) ** 2
    return Evaluation(r2 * ev.value, ev.tail, ev.terms)


def _thread_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("SHEFFER_SZASZ_THREADS", "1") or 1)
    if workers == 0:
        return os.cpu_count() or 1
    return max(1, workers)


def eval_grid(fam, cfg: OperatorConfig, f, grid, chlodowsky: bool = True, workers: int | None = None):
    """Per-point operator values as a list of ``(x, value, tail)`` in grid order."""
    xs = [float(x) for x in grid]
    if any(x < 0 for x in xs):
        raise ValueError("grid points must be non-negative")
    f = as_target(f)

    def one(x):
        try:
            ev = apply_T_star(fam, cfg, f, x) if chlodowsky else apply_T(fam, cfg.n, f, x, cfg)
        except TruncationError as err:
            raise TruncationError(f"{err} at x={x}", x=x, n=cfg.n) from err
        return (x, ev.value, ev.tail)

    nworkers = _thread_count(workers)
    if nworkers == 1:
        return [one(x) for x in xs]
    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        return list(pool.map(one, xs))
