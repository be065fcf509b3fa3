import json

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from app import cli
from bench.export import CSV_HEADER


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, *args):
    return runner.invoke(cli, ["--no-log-file", "--log-level", "WARNING", *args])


@pytest.fixture
def records_csv(runner, tmp_path):
    path = tmp_path / "records.csv"
    result = _invoke(runner, "run", "--epsilon", "0.1", "--epsilon", "0.05", "--p0", "0.8",
                     "--trials", "3", "--workers", "1", "--output", str(path), "--no-progress")
    assert result.exit_code == 0, result.output
    return path


def test_run_writes_records(records_csv):
    df = pd.read_csv(records_csv)
    assert list(df.columns) == CSV_HEADER
    assert len(df) == 6
    assert set(df["method"]) == {"rpe"}


def test_run_with_summary_and_plot(runner, tmp_path):
    summary, plot = tmp_path / "summary.csv", tmp_path / "plot.json"
    result = _invoke(runner, "run", "--xi", "0.3", "--epsilon", "0.05", "--p0", "0.99", "--trials", "2",
                     "--output", str(tmp_path / "r.csv"), "--summary", str(summary), "--plot", str(plot),
                     "--no-progress")
    assert result.exit_code == 0, result.output
    assert pd.read_csv(summary)["method"].tolist() == ["rpe_lowdepth"]
    assert "hconcat" in json.loads(plot.read_text())


def test_run_from_config_file(runner, tmp_path):
    config = tmp_path / "plan.yaml"
    config.write_text(yaml.safe_dump({
        "name": "qpe-only",
        "methods": [{"kind": "qpe", "n_ancilla": [4, 6], "shots": 3}],
        "p0s": [0.7],
        "trials": 2,
    }))
    output = tmp_path / "qpe.csv"
    result = _invoke(runner, "run", "--config", str(config), "--output", str(output), "--no-progress")
    assert result.exit_code == 0, result.output
    df = pd.read_csv(output)
    assert set(df["method"]) == {"qpe"}
    assert sorted(set(df["J"])) == [4, 6]
    assert set(df["N_s"]) == {3}


def test_run_reports_skipped_cells(runner, tmp_path):
    result = _invoke(runner, "run", "--epsilon", "0.1", "--p0", "0.5", "--p0", "0.9", "--trials", "1",
                     "--output", str(tmp_path / "r.csv"), "--no-progress")
    assert result.exit_code == 0, result.output
    assert "skipped cell" in result.output


def test_invalid_plan_is_a_clean_error(runner, tmp_path):
    result = _invoke(runner, "run", "--p0", "1.5", "--output", str(tmp_path / "r.csv"), "--no-progress")
    assert result.exit_code == 1
    assert "Invalid experiment plan" in result.output


def test_summarize(runner, records_csv, tmp_path):
    result = _invoke(runner, "summarize", str(records_csv), "--slopes")
    assert result.exit_code == 0, result.output
    assert "mean_error" in result.output and "slope" in result.output

    output = tmp_path / "summary.csv"
    assert _invoke(runner, "summarize", str(records_csv), "--output", str(output)).exit_code == 0
    assert len(pd.read_csv(output)) == 2


def test_summarize_header_only_file(runner, tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(",".join(CSV_HEADER) + "\n")
    result = _invoke(runner, "summarize", str(path))
    assert result.exit_code == 1
    assert "No records" in result.output


def test_plot(runner, records_csv, tmp_path):
    output = tmp_path / "fig.json"
    result = _invoke(runner, "plot", str(records_csv), "--output", str(output), "--description", "L=8 g=4")
    assert result.exit_code == 0, result.output
    assert json.loads(output.read_text())["description"] == "L=8 g=4"


def test_spectrum(runner, tmp_path):
    output = tmp_path / "spectrum.json"
    result = _invoke(runner, "spectrum", "-L", "4", "-g", "1.0", "--p0", "0.9", "--output", str(output))
    assert result.exit_code == 0, result.output
    document = json.loads(output.read_text())
    assert len(document["phases"]) == 16
    assert sum(document["weights"]) == pytest.approx(1.0)
    assert "ground phase=" in result.output


def test_selftest(runner):
    result = _invoke(runner, "selftest")
    assert result.exit_code == 0, result.output
    assert "all checks passed" in result.output


def test_target_index_out_of_range_is_a_clean_error(runner, tmp_path):
    config = tmp_path / "plan.yaml"
    config.write_text(yaml.safe_dump({
        "spectrum": {"tfim": {"L": 2, "g": 1.0}},
        "target_index": 10,
        "epsilons": [0.1],
        "trials": 1,
    }))
    result = _invoke(runner, "run", "--config", str(config), "--output", str(tmp_path / "r.csv"), "--no-progress")
    assert result.exit_code == 1
    assert "out of range" in result.output
    assert not (tmp_path / "r.csv").exists()
