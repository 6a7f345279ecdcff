"""Run configuration: a JSON document with every numeric default listed in ``DEFAULTS``.

Schema (all keys optional)::

    family        "szasz" | "example41" | "example42"
                  | {"appell": [g_0, g_1, ...]}
                  | {"A": [a_0, ...], "H": [h_0, h_1, ...], "name": "..."}
    scaling       "sqrt" | "linear" | "power:P" | "table:N=B,N=B,..."
    n             list of positive integers (strings such as "1e19" are exact)
    function      "paper_f" | "e0" | "e1" | "e2" | "rho" | "rho2" | "x_over_1px"
                  | {"samples": {"x": [...], "y": [...]}}
    interval      [x_lo, x_hi] for the convergence grid
    grid          number of convergence grid points
    operators     subset of ["T", "T*"]
    x             evaluation points for the pointwise bounds
    theorems      subset of ["T2_6", "T2_7", "T2_8", "T2_9", "T3_7"]
    ...           see DEFAULTS for the remaining numeric settings

CSV output: UTF-8, ``\\n`` line endings, values with 10 significant digits,
scientific notation when ``0 < |v| < 1e-3``, integers (``n``) verbatim.
Converge CSV columns are ``x, f(x)`` followed by ``T[n=N]`` for every ``n``
and then ``T*[n=N]`` for every ``n``.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

import numpy as np

from .operators import ScalingSequence, TargetFunction
from .sheffer import BUILTIN_NAMES, ShefferFamily, appell_family, builtin_family, make_family

DEFAULTS = {
    "family": "szasz",
    "scaling": "sqrt",
    "n": [10, 50, 100, 200, 300],
    "function": "paper_f",
    "interval": [0.0, 1.0],
    "grid": 101,
    "operators": ["T", "T*"],
    "tail_epsilon": 1e-12,
    "max_terms": 100000,
    "variant": "two_point",
    "modulus_grid": 2001,
    "table_variant": "exact_increment",
    "table_grid": 20001,
    "a": 1.0,
    "x": [0.0, 0.25, 0.5, 0.75, 1.0],
    "theorems": ["T2_6", "T2_7", "T2_8", "T2_9", "T3_7"],
    "M": 1.0,
    "x_max": 50.0,
    "scan_max": 10.0,
    "scan_step": 0.1,
    "scan_order": 128,
    "probe_n": [10, 100, 1000, 10000, 100000, 1000000],
    "out": None,
}

THEOREMS = ("T2_6", "T2_7", "T2_8", "T2_9", "T3_7")
FUNCTION_NAMES = ("paper_f", "e0", "e1", "e2", "rho", "rho2", "x_over_1px")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None, line=None, column=None):
        self.field = field
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{'; '.join(where)}: {message}" if where else message)


def paper_f(x):
    """``f(x) = -4 x exp(-3x)``, the test function of every experiment."""
    return -4.0 * x * np.exp(-3.0 * x)


_CATALOG = {
    "paper_f": (paper_f, (0.0, 1.0)),
    "e0": (lambda x: np.ones_like(x), (0.0, 1.0)),
    "e1": (lambda x: x, (1.0, 1.0)),
    "e2": (lambda x: x * x, (1.0, 2.0)),
    "rho": (lambda x: 1.0 + x * x, (1.0, 2.0)),
    "rho2": (lambda x: (1.0 + x * x) ** 2, (2.0, 4.0)),
    "x_over_1px": (lambda x: x / (1.0 + x), (0.0, 1.0)),
}


def parse_int(value, field="n") -> int:
    """Exact integer from ints, integral floats or strings like ``"1e19"`` / ``"10^19"``."""
    if isinstance(value, bool):
        raise ConfigError(f"expected an integer, got {value!r}", field)
    if isinstance(value, int):
        out = value
    elif isinstance(value, float):
        if not value.is_integer():
            raise ConfigError(f"expected an integer, got {value!r}", field)
        out = int(value)
    elif isinstance(value, str):
        s = value.strip()
        if "^" in s:
            base, _, exp = s.partition("^")
            if base.strip() != "10":
                raise ConfigError(f"only powers of 10 are accepted, got {value!r}", field)
            s = f"1e{exp.strip()}"
        try:
            d = Decimal(s)
        except InvalidOperation:
            raise ConfigError(f"cannot parse integer {value!r}", field) from None
        if d != d.to_integral_value():
            raise ConfigError(f"expected an integer, got {value!r}", field)
        out = int(d)
    else:
        raise ConfigError(f"expected an integer, got {value!r}", field)
    if out < 1:
        raise ConfigError(f"n must be positive, got {out}", field)
    return out


def parse_scaling(spec) -> ScalingSequence:
    if isinstance(spec, dict):
        rule = spec.get("rule", "sqrt")
        if rule == "table":
            return ScalingSequence("table", table={parse_int(k, "scaling"): float(v) for k, v in spec.get("table", {}).items()})
        return ScalingSequence(rule, power=float(spec.get("power", 0.5)))
    if not isinstance(spec, str):
        raise ConfigError(f"unsupported scaling {spec!r}", "scaling")
    rule, _, arg = spec.partition(":")
    try:
        if rule == "power":
            return ScalingSequence("power", power=float(arg))
        if rule == "table":
            pairs = [item.split("=") for item in arg.split(",") if item]
            return ScalingSequence("table", table={parse_int(k, "scaling"): float(v) for k, v in pairs})
        return ScalingSequence(rule)
    except (ValueError, TypeError) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(str(err), "scaling") from None


def parse_family(spec) -> ShefferFamily:
    if isinstance(spec, str):
        if spec not in BUILTIN_NAMES:
            raise ConfigError(f"unknown family {spec!r}; builtins are {', '.join(BUILTIN_NAMES)}", "family")
        return builtin_family(spec)
    if isinstance(spec, dict):
        try:
            if "appell" in spec:
                return appell_family([float(c) for c in spec["appell"]], name=spec.get("name", "appell"))
            return make_family(
                [float(c) for c in spec["A"]], [float(c) for c in spec["H"]], name=spec.get("name", "custom")
            )
        except KeyError as err:
            raise ConfigError(f"missing key {err.args[0]!r}", "family") from None
        except (TypeError, ValueError) as err:
            raise ConfigError(str(err), "family") from None
    raise ConfigError(f"unsupported family spec {spec!r}", "family")


def parse_function(spec) -> TargetFunction:
    if isinstance(spec, str):
        if spec not in _CATALOG:
            raise ConfigError(f"unknown function {spec!r}; catalog is {', '.join(FUNCTION_NAMES)}", "function")
        fn, env = _CATALOG[spec]
        return TargetFunction(fn, env, spec)
    if isinstance(spec, dict) and "samples" in spec:
        try:
            xs = np.asarray(spec["samples"]["x"], dtype=float)
            ys = np.asarray(spec["samples"]["y"], dtype=float)
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError(f"bad samples: {err}", "function") from None
        if xs.shape != ys.shape or xs.size < 2 or np.any(np.diff(xs) <= 0):
            raise ConfigError("samples need matching x/y arrays with increasing x", "function")
        return TargetFunction(lambda x: np.interp(x, xs, ys), None, "samples")
    raise ConfigError(f"unsupported function spec {spec!r}", "function")


@dataclass
class RunConfig:
    """A validated run configuration; ``raw`` keeps the JSON-level values."""

    raw: dict = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    def __post_init__(self):
        merged = copy.deepcopy(DEFAULTS)
        unknown = set(self.raw) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", sorted(unknown)[0])
        merged.update(self.raw)
        self.raw = merged
        self._check()

    def _check(self):
        r = self.raw
        self.family = parse_family(r["family"])
        self.scaling = parse_scaling(r["scaling"])
        self.function = parse_function(r["function"])
        if not isinstance(r["n"], list) or not r["n"]:
            raise ConfigError("expected a non-empty list", "n")
        self.n = [parse_int(v) for v in r["n"]]
        self.probe_n = [parse_int(v, "probe_n") for v in r["probe_n"]]
        for key in ("tail_epsilon", "a", "M", "x_max", "scan_max", "scan_step"):
            if not isinstance(r[key], (int, float)) or isinstance(r[key], bool) or not math.isfinite(r[key]):
                raise ConfigError(f"expected a number, got {r[key]!r}", key)
        if not 0 < r["tail_epsilon"] < 1:
            raise ConfigError("must lie in (0, 1)", "tail_epsilon")
        if r["a"] <= 0:
            raise ConfigError("must be positive", "a")
        for key in ("grid", "max_terms", "modulus_grid", "table_grid", "scan_order"):
            if not isinstance(r[key], int) or isinstance(r[key], bool) or r[key] < 1:
                raise ConfigError(f"expected a positive integer, got {r[key]!r}", key)
        iv = r["interval"]
        if not (isinstance(iv, list) and len(iv) == 2 and 0 <= iv[0] <= iv[1]):
            raise ConfigError("expected [lo, hi] with 0 <= lo <= hi", "interval")
        for key in ("variant", "table_variant"):
            if r[key] not in ("two_point", "exact_increment"):
                raise ConfigError(f"unknown modulus variant {r[key]!r}", key)
        if not set(r["operators"]) <= {"T", "T*"} or not r["operators"]:
            raise ConfigError("operators must be a non-empty subset of ['T', 'T*']", "operators")
        if not set(r["theorems"]) <= set(THEOREMS):
            raise ConfigError(f"theorems must be a subset of {list(THEOREMS)}", "theorems")
        if not isinstance(r["x"], list) or any(not isinstance(v, (int, float)) or v < 0 for v in r["x"]):
            raise ConfigError("expected a list of non-negative numbers", "x")

    def __getitem__(self, key):
        return self.raw[key]

    def to_dict(self) -> dict:
        out = copy.deepcopy(self.raw)
        out["n"] = [int(v) for v in self.n]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def updated(self, **overrides) -> "RunConfig":
        raw = self.to_dict()
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(raw)


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as err:
        raise ConfigError(err.msg, line=err.lineno, column=err.colno) from None
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object")
    return RunConfig(data)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_value(v) -> str:
    """10 significant digits; scientific for ``0 < |v| < 1e-3``."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if v == 0.0:
        return "0"
    if not math.isfinite(v):
        return repr(v)
    if abs(v) < 1e-3:
        return f"{v:.9e}"
    return f"{v:.10g}"
