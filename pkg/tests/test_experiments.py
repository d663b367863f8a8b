import json

import numpy as np
import pytest
from click.testing import CliRunner

from densecode import experiments as ex
from densecode.channels import FullyCorrelatedPauli, UncorrelatedDepolarizing
from densecode.cli import main


def test_config_validation():
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig("nope")
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig("scatter_correlated")
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig("scatter_uncorrelated", noise=ex.CASE1)
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig("rank2_scatter", measure="ggm")
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig("verify_theorem1", samples=0)
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig("verify_theorem1", noise=ex.CASE1)


def test_sample_count_defaults():
    assert ex.ExperimentConfig("verify_theorem1").n_samples == 10_000
    assert ex.ExperimentConfig("rank2_scatter", full=True).n_samples == 100_000
    assert ex.ExperimentConfig("verify_theorem3", full=True).n_samples == 50_000
    assert ex.ExperimentConfig("verify_theorem3").noise_or_default == ex.CASE1


def test_from_mapping_and_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# case 2\nexperiment = scatter_correlated\nchannel=correlated_pauli\n"
                    "q = 0.93, 0.01, 0.02, 0.04\nsamples=5\nfull=yes\n")
    cfg = ex.ExperimentConfig.from_mapping(ex.read_config_file(path))
    assert cfg.noise == FullyCorrelatedPauli((0.93, 0.01, 0.02, 0.04))
    assert cfg.samples == 5 and cfg.full
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig.from_mapping({"experiment": "verify_theorem1", "colour": "red"})
    bad = tmp_path / "bad.cfg"
    bad.write_text("experiment verify_theorem1\n")
    with pytest.raises(ex.ConfigError):
        ex.read_config_file(bad)


def test_rerun_is_byte_identical(tmp_path):
    cfg = ex.ExperimentConfig("scatter_correlated", samples=12, seed=5, noise=ex.CASE2,
                              output_path=str(tmp_path / "a"))
    first = ex.run(cfg)
    second = ex.run(ex.ExperimentConfig("scatter_correlated", samples=12, seed=5, noise=ex.CASE2,
                                        output_path=str(tmp_path / "b")))
    assert first.csv_path.name == "scatter_correlated_seed5_n12.csv"
    assert first.csv_path.read_bytes() == second.csv_path.read_bytes()
    summary = json.loads(first.json_path.read_text())
    assert summary["config"]["seed"] == 5 and summary["rng"].startswith("numpy.PCG64")
    assert "runtime_seconds" in summary


def test_samples_do_not_depend_on_run_length():
    short = ex.run(ex.ExperimentConfig("verify_theorem1", samples=5, seed=2)).rows
    long = ex.run(ex.ExperimentConfig("verify_theorem1", samples=20, seed=2)).rows
    assert ex.rows_to_csv(short) == ex.rows_to_csv(long[:5])


def test_csv_header_is_fixed():
    text = ex.rows_to_csv(ex.run(ex.ExperimentConfig("verify_theorem1", samples=3)).rows)
    assert text.splitlines()[0] == ("state_id,lambda_R,capacity,raw_capacity,ggm,tangle_score,"
                                    "discord_score,cond_i,cond_ii,above_gghz_curve")


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ex.ConfigError):
        ex.run(ex.ExperimentConfig("verify_theorem1", samples=2, output_path=str(blocker)))


def test_fraction_stderr():
    f = ex.fraction(25, 100)
    assert f["fraction"] == 0.25 and f["stderr"] == pytest.approx(np.sqrt(0.25 * 0.75 / 100))
    assert ex.fraction(0, 0)["fraction"] is None


def test_small_runs_of_every_experiment():
    for name, noise in [("scatter_noiseless", None), ("verify_theorem2", None),
                        ("rank2_scatter", None), ("verify_prop1", None),
                        ("verify_theorem3", None), ("scatter_uncorrelated", UncorrelatedDepolarizing(0.04))]:
        res = ex.run(ex.ExperimentConfig(name, samples=8, seed=1, noise=noise))
        assert res.rows and res.passed


def test_rank8_sweep_maximum_at_pure_ghz():
    rows = ex.rank8_sweep(qs=[0.0, 0.5, 1.0], ps=[0.0, 0.05, 0.1])
    best = max(rows, key=lambda r: r["raw_capacity"])
    assert best["p"] == 0.0 and best["q"] in (0.0, 1.0)
    assert best["raw_capacity"] == pytest.approx(1.0)
    half = next(r for r in rows if r["q"] == 0.5 and r["p"] == 0.0)
    assert half["raw_capacity"] == pytest.approx(2 / 3)


def test_threshold_sweep_limits():
    first, last = ex.noise_threshold_sweep([0.5, 0.999])
    # at alpha = 1/2 any flip weight below 1/2 keeps the raw capacity above 2/3; the
    # strict 1e-9 guard on the capacity moves the edge by ~3e-5 where H is flat
    assert first["c_min_entropy"] == pytest.approx(0.5, abs=1e-4)
    assert first["threshold_min_entropy"] == pytest.approx(1.0, abs=1e-6)
    assert first["threshold_min_entropy"] > first["threshold_uncorrelated"]
    assert last["threshold_min_entropy"] < 0.02 and last["threshold_uncorrelated"] < 0.02
    assert last["c_min_entropy"] == pytest.approx(0.001, abs=1e-5)


def test_cli_verify_exit_code(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "--theorem", "1", "--samples", "20", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "verify_theorem1_seed0_n20.csv").exists()


def test_cli_run_with_channel_flags():
    runner = CliRunner()
    result = runner.invoke(main, ["run", "--experiment", "scatter_uncorrelated", "--channel", "depolarizing",
                                  "--p", "0.04", "--samples", "4", "--seed", "3"])
    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert summary["config"]["p"] == "0.04" and summary["config"]["seed"] == 3


def test_cli_rejects_bad_combination():
    result = CliRunner().invoke(main, ["run", "--experiment", "scatter_correlated", "--samples", "2"])
    assert result.exit_code == 2
    assert "correlated_pauli" in result.output


def test_cli_flags_override_config_file(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("experiment=verify_theorem1\nsamples=3\nseed=9\n")
    result = CliRunner().invoke(main, ["run", "--config", str(path), "--seed", "4"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["config"] == {
        "experiment": "verify_theorem1", "samples": 3, "seed": 4, "measure": "ggm", "full": False}
