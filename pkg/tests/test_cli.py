import json
import subprocess
import sys

import pytest

from sheffer_szasz.cli import main
from sheffer_szasz.config import (
    DEFAULTS,
    ConfigError,
    RunConfig,
    format_value,
    parse_config,
    parse_int,
    parse_scaling,
)


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return str(path)


# configuration parsing


def test_parse_int_is_exact():
    assert parse_int("1e19") == 10**19
    assert parse_int("10^19") == 10**19
    assert parse_int(1000.0) == 1000
    for bad in ("2^5", "1.5", 0, True, "abc", 2.5):
        with pytest.raises(ConfigError):
            parse_int(bad)


def test_parse_scaling_forms():
    assert parse_scaling("sqrt")(100) == 10
    assert parse_scaling("power:0.25")(10**4) == pytest.approx(10)
    assert parse_scaling("table:10=2,100=5")(100) == 5.0
    assert parse_scaling({"rule": "power", "power": 0.5})(16) == pytest.approx(4)
    with pytest.raises(ConfigError):
        parse_scaling("power:x")


def test_config_round_trip():
    text = json.dumps({"family": {"appell": [1, 0.5]}, "n": ["1e19", 10], "function": "e2", "scaling": "power:0.6"})
    cfg = parse_config(text)
    again = parse_config(cfg.to_json())
    assert again.to_dict() == cfg.to_dict()
    assert again.n == [10**19, 10]
    assert again.to_json() == cfg.to_json()


def test_config_defaults_and_unknown_keys():
    assert parse_config("").to_dict()["n"] == DEFAULTS["n"]
    with pytest.raises(ConfigError, match="field 'colour'"):
        RunConfig({"colour": "blue"})
    with pytest.raises(ConfigError, match="line 2, column 11"):
        parse_config('{\n  "grid": ,\n}')
    with pytest.raises(ConfigError, match="field 'tail_epsilon'"):
        RunConfig({"tail_epsilon": 2.0})


def test_format_value():
    assert format_value(10**19) == "10000000000000000000"
    assert format_value(0.0) == "0"
    assert format_value(0.9481710727123) == "0.9481710727"
    assert format_value(1.4225476356e-4) == "1.422547636e-04"


# exit codes


def test_validate_pass(capsys):
    code, out, _ = run(["validate", "--family", "szasz"], capsys)
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_validate_bad_h(tmp_path, capsys):
    path = write_config(tmp_path, {"family": {"A": [1.0], "H": [0.0, 2.0]}})
    code, out, _ = run(["validate", "--config", path], capsys)
    assert code == 2
    assert "H'(1) = 2" in out


def test_validate_linear_scaling_fails(capsys):
    code, out, _ = run(["validate", "--bn", "linear"], capsys)
    assert code == 2
    assert json.loads(out)["scaling"]["ratio_decreasing"] is False


def test_parse_error_exit_code(tmp_path, capsys):
    path = write_config(tmp_path, '{\n  "grid": ,\n}')
    code, _, err = run(["converge", "--config", path], capsys)
    assert code == 1
    assert "line 2" in err
    code, _, err = run(["table", "--family", "laguerre"], capsys)
    assert code == 1 and "family" in err


def test_numeric_failure_exit_code(tmp_path, capsys):
    path = write_config(tmp_path, {"max_terms": 20, "interval": [0, 5], "grid": 3, "n": [100]})
    code, _, err = run(["converge", "--config", path], capsys)
    assert code == 3
    assert "n=100" in err and "x=" in err


def test_validation_failure_blocks_runs(capsys):
    code, _, _ = run(["table", "--bn", "linear"], capsys)
    assert code == 2


# outputs


def test_table_command(tmp_path, capsys):
    out = tmp_path / "t1.csv"
    code, _, _ = run(["table", "--family", "example41", "--n", "10,1e19", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,b_n,bound,factor,delta,modulus"
    rows = [line.split(",") for line in lines[1:]]
    assert rows[1][0] == "10000000000000000000"
    assert float(rows[0][2]) == pytest.approx(0.9481710727, rel=1e-3)
    assert float(rows[1][2]) == pytest.approx(1.4225476356e-4, rel=1e-3)


def test_table_example42(capsys):
    code, out, _ = run(["table", "--family", "example42", "--n", "1000"], capsys)
    assert code == 0
    assert float(out.splitlines()[1].split(",")[2]) == pytest.approx(0.8409966996, rel=1e-3)


def test_converge_writes_summary(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    code, _, _ = run(["converge", "--family", "example41", "--out", str(out)], capsys)
    assert code == 0
    header = out.read_text().splitlines()[0].split(",")
    assert header[:3] == ["x", "f(x)", "T[n=10]"]
    assert header[-1] == "T*[n=300]"
    summary = (tmp_path / "conv.summary.csv").read_text().splitlines()
    assert summary[0] == "operator,n,b_n,sup_error"
    star = [float(line.split(",")[3]) for line in summary[1:] if line.startswith("T*")]
    assert len(star) == 5
    assert all(a > b for a, b in zip(star, star[1:]))


def test_converge_constant_function(tmp_path, capsys):
    path = write_config(tmp_path, {"function": "e0", "n": [10, 100], "grid": 11})
    code, out, _ = run(["converge", "--config", path], capsys)
    assert code == 0
    main_csv = out.split("\n\n")[0].splitlines()
    for line in main_csv[1:]:
        cells = line.split(",")
        assert all(float(v) == pytest.approx(1.0, abs=1e-12) for v in cells[2:])


def test_converge_degenerate_shape(tmp_path, capsys):
    path = write_config(tmp_path, {"n": [10], "grid": 1, "operators": ["T*"]})
    code, out, _ = run(["converge", "--config", path], capsys)
    assert code == 0
    main_csv = out.split("\n\n")[0].splitlines()
    assert main_csv[0] == "x,f(x),T*[n=10]"
    assert len(main_csv) == 2


def test_bounds_report(tmp_path, capsys):
    path = write_config(tmp_path, {"n": [100], "scaling": "table:100=10"})
    code, out, _ = run(["bounds", "--config", path], capsys)
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["T2_6"]["bound"] >= row["measured_sup_error"]
    for cell in row["pointwise"]:
        for thm in ("T2_7", "T2_8", "T2_9"):
            assert cell[thm]["bound"] >= cell["measured_error"]
    assert row["T3_7"]["components"]["lhs"] <= row["T3_7"]["bound"]


def test_bounds_constant_and_rho2(tmp_path, capsys):
    path = write_config(tmp_path, {"n": [100], "function": "e0", "theorems": ["T2_6", "T2_8"]})
    code, out, _ = run(["bounds", "--config", path], capsys)
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["measured_sup_error"] < 1e-10
    assert row["T2_6"]["bound"] >= 0 and "T3_7" not in row
    path = write_config(tmp_path, {"n": [100], "function": "rho2", "theorems": ["T3_7"]}, "rho2.json")
    code, out, _ = run(["bounds", "--config", path], capsys)
    assert json.loads(out)["rows"][0]["T3_7"]["components"]["lhs"] == pytest.approx(0.0, abs=1e-10)


def test_moments_report(capsys):
    code, out, _ = run(["moments", "--family", "example41", "--n", "10,100"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["constants"]["A1"] == pytest.approx(2.718281828)
    assert rep["korovkin"]["monotone"] is True
    cell = rep["moments"][0]
    assert cell["c2"] == pytest.approx(cell["c2_algebraic"], abs=1e-12)


def test_runs_are_byte_identical(tmp_path, capsys):
    for cmd in ("table", "converge"):
        paths = [tmp_path / f"{cmd}{i}.csv" for i in range(2)]
        for p in paths:
            assert run([cmd, "--family", "example42", "--out", str(p)], capsys)[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_thread_count_does_not_change_output(tmp_path, monkeypatch, capsys):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("SHEFFER_SZASZ_THREADS", threads)
        outs.append(run(["converge", "--n", "10,50"], capsys)[1])
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sheffer_szasz", "validate", "--family", "example42"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["family"]["warnings"]
