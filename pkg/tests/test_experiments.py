"""Experiment configs, reports, replay determinism, and the command line."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from walklab import cli, experiments
from walklab.experiments import (
    ConfigError,
    ExperimentConfig,
    json_safe,
    list_experiments,
    run_experiment,
)

F = Fraction


# ---------------------------------------------------------------------------
# configuration


def test_config_defaults():
    cfg = ExperimentConfig("E6")
    assert cfg.seed == 7
    assert cfg.exact
    assert cfg.fmt == "json"
    assert cfg.p == F(3, 4)


def test_config_from_text_full():
    cfg = ExperimentConfig.from_text("""
        # which experiment to run
        experiment = E4
        seed = 11
        k_grid = 2, 8, 32
        n_max = 6
        tol = 1e-3
        p = 2/3
        exact = true
        fmt = csv
    """)
    assert cfg.experiment == "E4"
    assert cfg.seed == 11
    assert cfg.k_grid == (2, 8, 32)
    assert cfg.n_max == 6
    assert cfg.tol == 1e-3
    assert cfg.p == F(2, 3)
    assert cfg.fmt == "csv"


def test_config_round_trip_through_dict():
    cfg = ExperimentConfig("E2", seed=3, k_grid=(1, 2), p=F(2, 3))
    data = cfg.to_dict()
    assert data["experiment"] == "E2"
    assert data["k_grid"] == [1, 2]
    assert data["p"] == "2/3"


@pytest.mark.parametrize("text,message", [
    ("experiment = E9", "unknown experiment"),
    ("seed = 1", "must set 'experiment'"),
    ("experiment = E1\nseed = x", "bad value"),
    ("experiment = E1\nseed = 1\nseed = 2", "duplicate"),
    ("experiment = E1\nwidth = 3", "unknown config key"),
    ("experiment E1", "expected 'key = value'"),
])
def test_config_from_text_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        ExperimentConfig.from_text(text)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig("E1", fmt="yaml")
    with pytest.raises(ConfigError):
        ExperimentConfig("E1", k_grid=(0,))
    with pytest.raises(ConfigError):
        ExperimentConfig("E1", p=F(5, 4))


# ---------------------------------------------------------------------------
# strict-JSON scrubbing


def test_json_safe_replaces_nonfinite():
    nan = float("nan")
    inf = float("inf")
    out = json_safe({"a": nan, "b": [1.5, inf], "c": (nan, "s"), "d": 3})
    assert out == {"a": None, "b": [1.5, None], "c": [None, "s"], "d": 3}
    assert json.loads(json.dumps(out)) == out


# ---------------------------------------------------------------------------
# registry and reports


def test_registry_lists_seven_experiments():
    entries = list_experiments()
    assert [ident for ident, _ in entries] == [f"E{i}" for i in range(1, 8)]
    assert all(desc for _, desc in entries)


def test_unknown_experiment_id_rejected():
    with pytest.raises(ConfigError):
        run_experiment("E9")


@pytest.fixture(scope="module")
def e6_report():
    return run_experiment("E6")


def test_report_shape(e6_report):
    rep = e6_report
    assert rep.experiment == "E6"
    assert rep.passed
    assert rep.expectations and all(e["passed"] for e in rep.expectations)
    assert rep.config["experiment"] == "E6"
    assert rep.wall_clock_s > 0
    assert rep.timestamp


def test_replay_payload_is_deterministic(e6_report):
    again = run_experiment(ExperimentConfig("E6"))
    assert again.replay_payload() == e6_report.replay_payload()


def test_to_json_differs_only_in_timing(e6_report):
    again = run_experiment("E6")
    a = json.loads(e6_report.to_json())
    b = json.loads(again.to_json())
    for doc in (a, b):
        doc.pop("wall_clock_s")
        doc.pop("timestamp")
    assert a == b


def test_json_output_is_strict(e6_report):
    json.loads(e6_report.to_json(), parse_constant=lambda s: pytest.fail(s))


def test_ladder_csv_rows():
    rep = run_experiment(ExperimentConfig("E4", k_grid=(2,), n_max=4))
    csv = rep.ladder_csv()
    lines = csv.strip().splitlines()
    assert lines[0] == "measure,n,H,ratio,diff"
    assert len(lines) > 5
    assert any(line.split(",")[1] == "4" for line in lines[1:])


def test_seed_changes_monte_carlo_results():
    a = run_experiment(ExperimentConfig("E6", seed=1))
    b = run_experiment(ExperimentConfig("E6", seed=2))
    assert a.replay_payload() != b.replay_payload()


# ---------------------------------------------------------------------------
# command line


def test_cli_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    assert "E1" in out and "E7" in out


def test_cli_ladder_csv(capsys):
    assert cli.main(["ladder", "z_drift(k=2)", "--nmax", "3",
                     "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "n,H,ratio,diff"
    assert len(out.strip().splitlines()) == 5


def test_cli_ladder_json_is_strict(capsys):
    assert cli.main(["ladder", "z_drift(k=2)", "--nmax", "3"]) == 0
    doc = json.loads(capsys.readouterr().out,
                     parse_constant=lambda s: pytest.fail(s))
    assert doc["rows"][0]["ratio"] is None


def test_cli_global_flags_after_subcommand(capsys):
    assert cli.main(["ladder", "--format", "csv", "z_drift(k=2)",
                     "--nmax", "2"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["ladder", "z_drift(k=2)", "--nmax", "2",
                     "--format", "csv"]) == 0
    assert capsys.readouterr().out == first


def test_cli_escape_exact(capsys):
    assert cli.main(["escape", "z_drift()", "--method", "exact"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "exact-series"
    assert doc["lo"] <= 0.5 <= doc["hi"]


def test_cli_escape_recurrence_certificate(capsys):
    assert cli.main(["escape", "z_drift(k=2)", "--method", "exact"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "recurrence-zero"
    assert doc["value"] == 0.0


def test_cli_magnus_check_identity(capsys):
    code = cli.main(["magnus", "check-identity", "[x1, x2]",
                     "--d", "2", "--m", "1"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) is True
    code = cli.main(["magnus", "check-identity", "[x1, x2]",
                     "--d", "2", "--m", "2"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) is False


def test_cli_magnus_embed(capsys):
    assert cli.main(["magnus", "embed", "x1", "--d", "2", "--m", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["word"] == "x1"
    assert doc["group"] == "S(2,2)"
    assert "lamp" in doc["image"]
    assert doc["is_identity"] is False


def test_cli_experiment_run(capsys):
    assert cli.main(["experiment", "run", "E6"]) == 0
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert doc["experiment"] == "E6" and doc["passed"] is True
    assert "[PASS]" in captured.err


def test_cli_experiment_run_to_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["experiment", "run", "E6", "--out", str(out)]) == 0
    capsys.readouterr()
    assert json.loads(out.read_text())["experiment"] == "E6"


def test_cli_error_exit_codes(capsys):
    assert cli.main(["ladder", "nosuch(k=2)"]) == 2
    assert "error" in capsys.readouterr().err.lower()
    assert cli.main(["escape", 'measure { atom "a" 1 }']) == 2
    capsys.readouterr()
    assert cli.main(["experiment", "run", "E9"]) == 2
