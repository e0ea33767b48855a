import csv
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

import gibbslearn.cli as cli
from gibbslearn.verify import CheckResult


@pytest.fixture
def runner():
    return CliRunner()


def test_gen_is_deterministic(runner, tmp_path):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    args = ["gen", "--model", "random", "--geometry", "chain:4", "--seed", "7"]
    assert runner.invoke(cli.main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(cli.main, args + ["--out", str(b)]).exit_code == 0
    r = runner.invoke(
        cli.main,
        ["gen", "--model", "random", "--geometry", "chain:4", "--seed", "8",
         "--out", str(c)],
    )
    assert r.exit_code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_gen_rejects_bad_geometry(runner, tmp_path):
    r = runner.invoke(
        cli.main, ["gen", "--geometry", "ring:4", "--out", str(tmp_path / "x.json")]
    )
    assert r.exit_code != 0


def test_verify_suite_passes(runner):
    r = runner.invoke(cli.main, ["verify", "--suite", "kms"])
    assert r.exit_code == 0
    assert "PASS kms/" in r.output
    assert "checks passed" in r.output


def test_verify_exit_code_on_failure(runner, monkeypatch):
    def fake(name, seed):
        return [CheckResult("kms", "forced", False, 1.0, 0.5)]

    monkeypatch.setattr(cli, "run_suite", fake)
    r = runner.invoke(cli.main, ["verify", "--suite", "kms"])
    assert r.exit_code == 1
    assert "FAIL kms/forced" in r.output


def test_learn_requires_model_or_config(runner, tmp_path):
    r = runner.invoke(
        cli.main, ["learn", "--beta", "1.0", "--out", str(tmp_path / "run")]
    )
    assert r.exit_code != 0


def test_learn_exact_end_to_end(runner, tmp_path):
    model_path = tmp_path / "model.json"
    assert (
        runner.invoke(
            cli.main,
            ["gen", "--model", "tfim", "--geometry", "chain:2", "--out", str(model_path)],
        ).exit_code
        == 0
    )
    out = tmp_path / "run"
    r = runner.invoke(
        cli.main,
        [
            "learn", "--config", str(model_path), "--beta", "1.0",
            "--epsilon", "0.1", "--kappa", "0.1", "--ell", "3",
            "--search", "sweep", "--exact",
            "--theory-constants", "1", "1", "1",
            "--out", str(out),
        ],
    )
    assert r.exit_code == 0, r.output
    assert r.output.startswith("ok:")

    doc = json.loads((out / "report.json").read_text())
    assert doc["mode"] == "simple"
    assert doc["schema_version"] == 1
    assert doc["config"]["beta"] == 1.0
    assert doc["max_error"] <= 0.1 + 1e-3
    assert "alpha_ln_stated" in doc["theory_parameters"]

    with (out / "coefficients.csv").open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [c for c in rows[0]] == ["term_id", "pauli", "learned", "truth", "abs_error"]
    assert len(rows) == 3
    for row in rows:
        assert abs(float(row["learned"]) - float(row["truth"])) == pytest.approx(
            float(row["abs_error"]), abs=1e-9
        )

    assert (out / "learned.png").stat().st_size > 0
    assert (out / "errors.png").stat().st_size > 0
    assert not (out / "measurements.csv").exists()


def test_learn_shots_writes_transcript(runner, tmp_path):
    out = tmp_path / "run"
    r = runner.invoke(
        cli.main,
        [
            "learn", "--model", "tfim", "--geometry", "chain:2",
            "--beta", "1.0", "--epsilon", "0.5", "--kappa", "0.5", "--ell", "3",
            "--shots", "2000", "--no-plots", "--out", str(out),
        ],
    )
    assert r.exit_code == 0, r.output
    assert (out / "measurements.csv").exists()
    doc = json.loads((out / "report.json").read_text())
    assert doc["samples_used"] > 0
    assert not (out / "learned.png").exists()


def test_learn_iterative_writes_iteration_figure(runner, tmp_path):
    out = tmp_path / "run"
    r = runner.invoke(
        cli.main,
        [
            "learn", "--model", "tfim", "--geometry", "chain:2",
            "--mode", "iterative", "--beta", "1.0", "--epsilon", "0.06",
            "--eta0", "0.25", "--ell", "3", "--search", "sweep", "--exact",
            "--out", str(out),
        ],
    )
    assert r.exit_code == 0, r.output
    doc = json.loads((out / "report.json").read_text())
    assert doc["mode"] == "iterative"
    assert doc["iterations"] == 3
    assert (out / "iterations.png").stat().st_size > 0


def synthetic_report(path: Path, epsilon: float, samples: int, seed: int = 0):
    path.mkdir(parents=True)
    doc = {
        "schema_version": 1,
        "mode": "simple",
        "learned": {},
        "max_error": epsilon / 2,
        "samples_used": samples,
        "q_evals": 10,
        "iterations": 1,
        "wall_time": 1.0,
        "success": True,
        "config": {"mode": "simple", "beta": 1.0, "epsilon": epsilon, "seed": seed},
    }
    (path / "report.json").write_text(json.dumps(doc))


def test_report_aggregates_and_fits_slope(runner, tmp_path):
    runs = tmp_path / "runs"
    # samples laid out exactly on N = 1000 / eps^2
    for i, eps in enumerate((0.5, 0.25, 0.125)):
        synthetic_report(runs / f"r{i}", eps, round(1000 / eps**2), seed=i)
    out = tmp_path / "agg"
    r = runner.invoke(cli.main, ["report", str(runs), "--out", str(out)])
    assert r.exit_code == 0, r.output
    with (out / "sweep.csv").open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    assert {row["epsilon"] for row in rows} == {"0.5", "0.25", "0.125"}
    slopes = json.loads((out / "slopes.json").read_text())
    assert slopes["samples_vs_epsilon"] == pytest.approx(-2.0, abs=1e-9)
    assert (out / "samples_vs_epsilon.png").stat().st_size > 0
    assert (out / "error_vs_epsilon.png").stat().st_size > 0


def test_report_requires_inputs(runner, tmp_path):
    out = tmp_path / "agg"
    empty = tmp_path / "none"
    empty.mkdir()
    r = runner.invoke(cli.main, ["report", str(empty), "--out", str(out)])
    assert r.exit_code != 0
