"""Command-line front end.

Subcommands ``validate``, ``converge``, ``table``, ``bounds`` and ``moments``.
Exit codes: 0 success, 1 configuration/parse error, 2 validation failure,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, format_value, load_config, parse_config
from .moments import MomentSet, korovkin_report
from .operators import OperatorConfig, TruncationError, apply_T_star, eval_grid
from .sheffer import DEFAULT_SCAN_ORDER, FamilyError, validate_family
from .smoothness import bound_thm26, bound_thm27, bound_thm28, bound_thm29, estimate_cb2_norms
from .weighted import bound_thm37

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


class ValidationFailure(RuntimeError):
    pass


def _csv(rows) -> str:
    buf = io.StringIO()
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else format_value(v) for v in row) + "\n")
    return buf.getvalue()


def _workers() -> int:
    try:
        return int(os.environ.get("SHEFFER_SZASZ_THREADS", "0") or 0)
    except ValueError:
        return 1


def _op_config(cfg: RunConfig, n) -> OperatorConfig:
    return OperatorConfig(n=n, b_n=cfg.scaling(n), tail_epsilon=cfg["tail_epsilon"], max_terms=cfg["max_terms"])


def validation_report(cfg: RunConfig) -> dict:
    """Family checks plus the empirical ``b_n`` check; raises :class:`FamilyError` on hard failures."""
    scan = np.round(np.arange(0.0, cfg["scan_max"] + 1e-9, cfg["scan_step"]), 12)
    fam_report = validate_family(cfg.family, scan, cfg["scan_order"] or DEFAULT_SCAN_ORDER)
    probe = sorted(set(cfg.probe_n) | set(cfg.n)) if cfg.scaling.rule != "table" else sorted(cfg.scaling.table)
    scaling = cfg.scaling.check(probe)
    scaling["rule"] = cfg.scaling.describe()
    return {
        "family": fam_report.to_dict(),
        "scaling": scaling,
        "passed": fam_report.passed and scaling["passed"],
    }


def _require_valid(cfg: RunConfig):
    report = validation_report(cfg)
    if not report["passed"]:
        raise ValidationFailure(json.dumps(report, indent=2))
    return report


def cmd_validate(cfg: RunConfig) -> tuple[int, str]:
    try:
        report = validation_report(cfg)
    except FamilyError as err:
        report = {"family": {"family": cfg.family.name, "passed": False, "error": str(err)}, "passed": False}
    text = json.dumps(report, indent=2) + "\n"
    return (EXIT_OK if report["passed"] else EXIT_INVALID), text


def converge_tables(cfg: RunConfig) -> tuple[str, str]:
    """Main CSV (one row per grid point) and the summary CSV of sup errors."""
    _require_valid(cfg)
    lo, hi = cfg["interval"]
    xs = np.linspace(lo, hi, cfg["grid"]) if cfg["grid"] > 1 else np.array([float(lo)])
    f = cfg.function
    fx = f(xs)
    header = ["x", "f(x)"]
    columns = []
    summary = [["operator", "n", "b_n", "sup_error"]]
    for op in ("T", "T*"):
        if op not in cfg["operators"]:
            continue
        for n in cfg.n:
            oc = _op_config(cfg, n)
            try:
                vals = eval_grid(cfg.family, oc, f, xs, chlodowsky=(op == "T*"), workers=_workers())
            except TruncationError as err:
                raise TruncationError(f"operator {op}, n={n}, x={err.x}: {err}", x=err.x, n=n) from err
            col = np.array([v for _, v, _ in vals])
            header.append(f"{op}[n={n}]")
            columns.append(col)
            summary.append([op, n, oc.b_n if op == "T*" else 1.0, float(np.max(np.abs(col - fx)))])
    rows = [header] + [[x, fv] + [c[i] for c in columns] for i, (x, fv) in enumerate(zip(xs, fx))]
    return _csv(rows), _csv(summary)


def table_rows(cfg: RunConfig) -> list:
    """Uniform modulus bound per ``n`` via closed forms only (no operator sums)."""
    _require_valid(cfg)
    rows = []
    for n in cfg.n:
        b = cfg.scaling(n)
        rep = bound_thm26(cfg.family, n, b, cfg.function, cfg["a"], cfg["table_variant"], cfg["table_grid"])
        rows.append([n, b, rep.bound, rep.components["factor"], rep.components["delta"], rep.components["modulus"]])
    return rows


def table_csv(cfg: RunConfig) -> str:
    return _csv([["n", "b_n", "bound", "factor", "delta", "modulus"]] + table_rows(cfg))


def _feasible(cfg: RunConfig, n, b, x) -> bool:
    return n * x / b <= cfg["max_terms"]


def bounds_report(cfg: RunConfig) -> dict:
    _require_valid(cfg)
    fam, f, a = cfg.family, cfg.function, cfg["a"]
    norms = estimate_cb2_norms(f, cfg["x_max"])
    out = {"family": fam.name, "function": f.name, "a": a, "M": cfg["M"], "C_B2_norms": list(norms), "rows": []}
    xs_sup = np.linspace(0.0, a, cfg["grid"])
    for n in cfg.n:
        b = cfg.scaling(n)
        oc = _op_config(cfg, n)
        row = {"n": n, "b_n": b, "pointwise": []}
        measured_sup = None
        if _feasible(cfg, n, b, a):
            vals = eval_grid(fam, oc, f, xs_sup, workers=_workers())
            measured_sup = float(max(abs(v - float(f(np.array([x]))[0])) for x, v, _ in vals))
        row["measured_sup_error"] = measured_sup
        if "T2_6" in cfg["theorems"]:
            rep = bound_thm26(fam, n, b, f, a, cfg["variant"], cfg["modulus_grid"]).to_dict()
            rep["ratio"] = measured_sup / rep["bound"] if measured_sup is not None and rep["bound"] else None
            row["T2_6"] = rep
        for x in cfg["x"]:
            x = float(x)
            cell = {"x": x}
            err = None
            if _feasible(cfg, n, b, x):
                err = abs(apply_T_star(fam, oc, f, x).value - float(f(np.array([x]))[0]))
            cell["measured_error"] = err
            reps = []
            if "T2_7" in cfg["theorems"] and x <= a:
                reps.append(bound_thm27(fam, n, b, f, a, x, cfg["modulus_grid"]))
            if "T2_8" in cfg["theorems"]:
                reps.append(bound_thm28(fam, n, b, norms, x))
            if "T2_9" in cfg["theorems"]:
                reps.append(bound_thm29(fam, n, b, f, x, cfg["M"], (0.0, cfg["x_max"]), cfg["modulus_grid"]))
            for rep in reps:
                d = rep.to_dict()
                d["ratio"] = None if err is None or not d["bound"] else err / d["bound"]
                d["dominates"] = None if err is None else bool(d["bound"] >= err)
                cell[rep.theorem] = d
            row["pointwise"].append(cell)
        if "T3_7" in cfg["theorems"]:
            lhs_ok = _feasible(cfg, n, b, 20.0)
            row["T3_7"] = bound_thm37(fam, n, b, f, cfg=oc, compute_lhs=lhs_ok).to_dict()
        out["rows"].append(row)
    return out


def moments_report(cfg: RunConfig) -> dict:
    _require_valid(cfg)
    fam = cfg.family
    cells = []
    for n in cfg.n:
        b = cfg.scaling(n)
        for x in cfg["x"]:
            cells.append(vars(MomentSet.compute(fam, n, b, float(x))))
    return {
        "family": fam.name,
        "constants": {"A1": fam.A1, "A1p": fam.A1p, "A1pp": fam.A1pp, "H1": fam.H1, "H1pp": fam.H1pp},
        "moments": cells,
        "korovkin": korovkin_report(fam, cfg.scaling, cfg["a"], sorted(set(cfg.n))).to_dict(),
    }


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=float) + "\n"


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _summary_path(out) -> Path:
    p = Path(out)
    return p.with_name(p.stem + ".summary" + (p.suffix or ".csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sheffer-szasz", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--family", help="builtin family name")
    common.add_argument("--n", help="comma-separated n values, e.g. 10,1e3,1e19")
    common.add_argument("--bn", help="scaling rule: sqrt | linear | power:P | table:N=B,...")
    common.add_argument("--grid", type=int, help="number of grid points")
    common.add_argument("--variant", choices=("two_point", "exact_increment"))
    common.add_argument("--a", type=float, help="interval end a")
    common.add_argument("--tail-eps", type=float, dest="tail_eps", help="truncation tolerance")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "converge", "table", "bounds", "moments"):
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else parse_config("{}")
    over = {}
    if args.family:
        over["family"] = args.family
    if args.n:
        over["n"] = [v.strip() for v in args.n.split(",") if v.strip()]
    if args.bn:
        over["scaling"] = args.bn
    if args.grid is not None:
        over["grid"] = args.grid
    if args.variant:
        over["table_variant" if args.command == "table" else "variant"] = args.variant
    if args.a is not None:
        over["a"] = args.a
    if args.tail_eps is not None:
        over["tail_epsilon"] = args.tail_eps
    if args.out:
        over["out"] = args.out
    return cfg.updated(**over)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    out = cfg["out"]
    try:
        if args.command == "validate":
            code, text = cmd_validate(cfg)
            _write(text, out)
            if code:
                print("validation failed", file=sys.stderr)
            return code
        if args.command == "converge":
            main_csv, summary = converge_tables(cfg)
            if out is None:
                _write(main_csv + "\n" + summary, None)
            else:
                _write(main_csv, out)
                _write(summary, _summary_path(out))
        elif args.command == "table":
            _write(table_csv(cfg), out)
        elif args.command == "bounds":
            _write(_json(bounds_report(cfg)), out)
        elif args.command == "moments":
            _write(_json(moments_report(cfg)), out)
    except (FamilyError, ValidationFailure) as err:
        print(f"validation failed: {err}", file=sys.stderr)
        return EXIT_INVALID
    except (TruncationError, FloatingPointError, ZeroDivisionError, ValueError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
