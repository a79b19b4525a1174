"""Tests for the command-line entry point."""

from __future__ import annotations

import csv
import io
import json

import pytest
from pypegasus import __version__, parse_config
from pypegasus.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, fmt, main


def _write(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _split(text):
    """(header lines, body lines)."""
    lines = text.splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    return header, [ln for ln in lines if not ln.startswith("#")]


def _rows(text):
    _, body = _split(text)
    return list(csv.DictReader(io.StringIO("\n".join(body))))


@pytest.mark.parametrize(
    "value,expected",
    [
        pytest.param(0.1, "0.10000000000000001", id="float"),
        pytest.param(True, "true", id="bool"),
        pytest.param(None, "", id="none"),
        pytest.param(7, "7", id="int"),
    ],
)
def test_fmt(value, expected):
    assert fmt(value) == expected


def test_bounds_command(capsys):
    """Positional command with defaults prints key=value pairs."""
    assert main(["bounds", "--seed", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    header, body = _split(out)

    assert header[0] == f"# pypegasus {__version__}"
    assert header[1] == "# command=bounds"
    assert header[2] == "# seed=3"
    assert header[3].startswith("# config=")
    keys = [line.split("=", 1)[0] for line in body]
    assert keys == [
        "epsilon",
        "delta",
        "h_eps",
        "covering_bound",
        "log_covering_bound",
        "capacity_log_bound",
        "sample_size_bound",
    ]


def test_header_config_reproduces_run(capsys, tmp_path):
    """The config line of an output reruns to the same output."""
    main(["counterexample", "--seed", "5"])
    first = capsys.readouterr().out
    config_line = next(ln for ln in first.splitlines() if ln.startswith("# config="))
    path = tmp_path / "again.json"
    path.write_text(config_line.removeprefix("# config="), encoding="utf-8")

    assert main(["--config", str(path)]) == EXIT_OK
    assert capsys.readouterr().out == first


def test_counterexample_gap(capsys, tmp_path):
    config = _write(tmp_path, {"command": "counterexample", "seed": 2, "params": {"m": 10}})
    assert main(["--config", config]) == EXIT_OK
    [row] = _rows(capsys.readouterr().out)

    assert row["m"] == "10"
    assert float(row["v_hat"]) == 1.0
    assert float(row["v_true"]) == 0.0
    assert float(row["gap"]) == 1.0


def test_counterexample_simple_variant(capsys, tmp_path):
    config = _write(
        tmp_path,
        {"command": "counterexample", "params": {"variant": "simple", "m": 400, "candidates": 3}},
    )
    assert main(["--config", config]) == EXIT_OK
    [row] = _rows(capsys.readouterr().out)
    assert float(row["max_deviation"]) < 0.25


def test_gridworld_rows(capsys, tmp_path):
    doc = {"command": "gridworld", "params": {"m_values": [1, 5], "trials": 2, "h": 30}}
    assert main(["--config", _write(tmp_path, doc)]) == EXIT_OK
    out = capsys.readouterr().out
    header, _ = _split(out)
    rows = _rows(out)

    assert len(rows) == 4
    assert list(rows[0]) == ["variant", "m", "mean_value", "stderr", "trials"]
    assert any(line.startswith("# opt=") for line in header)


def test_fidelity_rows(capsys, tmp_path):
    doc = {"command": "fidelity", "params": {"n": 20_000}}
    assert main(["--config", _write(tmp_path, doc)]) == EXIT_OK
    out = capsys.readouterr().out
    assert len(_rows(out)) == 24 * 4
    assert "# all_passed=" in out


def test_bicycle_eval(capsys, tmp_path):
    doc = {"command": "bicycle-eval", "params": {"rides": 3, "horizon": 50}}
    assert main(["--config", _write(tmp_path, doc)]) == EXIT_OK
    out = capsys.readouterr().out
    assert len(_rows(out)) == 3
    assert "# upright_fraction=" in out


def test_bicycle_eval_scenarios_follow_params_seed(capsys, tmp_path):
    """A params seed pins the rides whatever the run seed is."""
    bodies = []
    for run_seed in (1, 2):
        doc = {
            "command": "bicycle-eval",
            "seed": run_seed,
            "params": {"rides": 3, "horizon": 50, "seed": 11},
        }
        assert main(["--config", _write(tmp_path, doc)]) == EXIT_OK
        bodies.append(_rows(capsys.readouterr().out))

    assert bodies[0] == bodies[1]


def test_bicycle_train(capsys, tmp_path):
    doc = {
        "command": "bicycle-train",
        "params": {"iters": 3, "horizon": 40, "m_scenarios": 2, "eval_rides": 2},
    }
    assert main(["--config", _write(tmp_path, doc)]) == EXIT_OK
    out = capsys.readouterr().out
    weights = next(ln for ln in out.splitlines() if ln.startswith("# weights="))
    assert len(weights.removeprefix("# weights=").split(";")) == 30


def test_output_file(tmp_path, capsys):
    out = tmp_path / "bounds.csv"
    assert main(["bounds", "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert out.read_text(encoding="utf-8").startswith("# pypegasus")


def test_same_output_for_any_thread_count(capsys, tmp_path):
    doc = {"command": "gridworld", "seed": 9, "params": {"m_values": [2], "trials": 3, "h": 25}}
    config = _write(tmp_path, doc)

    assert main(["--config", config, "--threads", "1"]) == EXIT_OK
    serial = capsys.readouterr().out
    assert main(["--config", config, "--threads", "8"]) == EXIT_OK
    assert capsys.readouterr().out == serial


@pytest.mark.parametrize(
    "doc",
    [
        pytest.param({"command": "bounds", "params": {"epsilon": -1}}, id="bad_value"),
        pytest.param({"command": "bounds", "colour": "red"}, id="unknown_key"),
        pytest.param({"command": "nope"}, id="unknown_command"),
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, doc):
    assert main(["--config", _write(tmp_path, doc)]) == EXIT_USAGE
    assert "pypegasus:" in capsys.readouterr().err


def test_invalid_json_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["--config", str(path)]) == EXIT_USAGE


def test_missing_config_file_exits_2(tmp_path):
    assert main(["--config", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_no_command_exits_2(capsys):
    assert main([]) == EXIT_USAGE


def test_command_mismatch_exits_2(tmp_path, capsys):
    config = _write(tmp_path, {"command": "bounds"})
    assert main(["gridworld", "--config", config]) == EXIT_USAGE
    assert "does not match" in capsys.readouterr().err


def test_bad_threads_exits_2(capsys):
    assert main(["bounds", "--threads", "0"]) == EXIT_USAGE


def test_unknown_positional_command():
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2


def test_runtime_failure_exits_1(tmp_path, capsys):
    """A runtime error prints a diagnostic and exits 1."""
    out = tmp_path / "missing-dir" / "out.csv"
    assert main(["bounds", "--out", str(out)]) == EXIT_FAILURE
    assert "bounds failed" in capsys.readouterr().err


def test_domain_failure_exits_1(tmp_path, capsys):
    """Bounds whose sample size leaves float range fail at run time."""
    doc = {"command": "bounds", "params": {"epsilon": 1e-300, "h_eps": 5}}
    assert main(["--config", _write(tmp_path, doc)]) == EXIT_FAILURE


def test_seed_override_validated():
    config = parse_config('{"command": "bounds"}')
    assert config.with_overrides(seed=12).seed == 12
