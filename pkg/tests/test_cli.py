"""End-to-end tests of the warpreg command line."""

import json

import pandas as pd
import pytest

from warpreg.cli import EXIT_INPUT, EXIT_OK, EXIT_PARTIAL, main


def _write(path, data):
    path.write_text(json.dumps(data))
    return path


@pytest.fixture
def small_config(tmp_path):
    return _write(tmp_path / "small.json", {"n_curves": 3, "grid_size": 200})


@pytest.fixture
def flat_dataset(tmp_path):
    """Three identical, unwarped curves."""
    config = _write(tmp_path / "flat.json", {"n_curves": 3, "grid_size": 200, "warp_family": "none", "z_std": 0.0})
    out = tmp_path / "flat"
    assert main(["simulate", "--config", str(config), "--out", str(out)]) == EXIT_OK
    return out


def test_simulate(tmp_path, small_config):
    out = tmp_path / "sim"
    assert main(["simulate", "--config", str(small_config), "--out", str(out)]) == EXIT_OK
    curves = pd.read_csv(out / "curves.csv")
    assert len(curves) == 600
    assert list(curves.columns) == ["curve_id", "t", "value"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["outputs"] == ["config.json", "curves.csv", "true_warps.csv", "truth.json"]
    assert manifest["seed"] == 0


def test_simulate_is_reproducible(tmp_path, small_config):
    for name in ("a", "b"):
        main(["simulate", "--config", str(small_config), "--seed", "4", "--out", str(tmp_path / name)])
    for output in ("curves.csv", "true_warps.csv", "truth.json"):
        assert (tmp_path / "a" / output).read_bytes() == (tmp_path / "b" / output).read_bytes()


def test_register_and_evaluate(tmp_path, flat_dataset):
    run = tmp_path / "run"
    code = main(["register", str(flat_dataset / "curves.csv"), "--ref", "0", "--basis-order", "15", "--out", str(run)])
    assert code == EXIT_OK
    results = pd.read_csv(run / "results.csv")
    assert results["converged"].all()
    assert (results["prd"] < 1.0).all()
    assert json.loads((run / "reference.json").read_text())["index"] == 0

    assert main(["evaluate", str(run), "--truth", str(flat_dataset)]) == EXIT_OK
    summary = pd.read_csv(run / "evaluation" / "summary.csv")
    assert summary.loc[0, "model_order"] == 15
    assert summary.loc[0, "warp_rmse_max"] < 1e-4


def test_select_ref(tmp_path, flat_dataset, capsys):
    assert main(["select-ref", str(flat_dataset / "curves.csv"), "--out", str(tmp_path / "ref")]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1"


def test_reference_out_of_range(tmp_path, flat_dataset):
    code = main(["register", str(flat_dataset / "curves.csv"), "--ref", "7", "--out", str(tmp_path / "run")])
    assert code == EXIT_INPUT


def test_unknown_config_key(tmp_path):
    config = _write(tmp_path / "bad.json", {"bogus": 1})
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "sim")]) == EXIT_INPUT


def test_usage_error(tmp_path):
    assert main(["simulate"]) == EXIT_INPUT
    assert main(["register", "x.csv", "--ref", "middle", "--out", str(tmp_path)]) == EXIT_INPUT


def test_replay(tmp_path, small_config):
    main(["simulate", "--config", str(small_config), "--preset", "f2-n1", "--out", str(tmp_path / "first")])
    assert main(["replay", str(tmp_path / "first" / "manifest.json"), "--out", str(tmp_path / "again")]) == EXIT_OK
    for output in ("curves.csv", "true_warps.csv", "truth.json", "config.json"):
        assert (tmp_path / "first" / output).read_bytes() == (tmp_path / "again" / output).read_bytes()


def test_unconverged_curve_exits_partial(tmp_path, small_config):
    sim = tmp_path / "sim"
    main(["simulate", "--config", str(small_config), "--out", str(sim)])
    config = _write(tmp_path / "short.json", {"registration": {"solver": {"max_iters": 1}}})
    run = tmp_path / "run"
    code = main(["register", str(sim / "curves.csv"), "--ref", "1", "--config", str(config), "--out", str(run)])
    assert code == EXIT_PARTIAL
    assert not pd.read_csv(run / "results.csv")["converged"].all()


def test_evaluate_sweep(tmp_path, flat_dataset):
    config = _write(tmp_path / "sweep.json", {"evaluation": {"orders": [10, 15], "kinds": ["fourier"]}})
    run = tmp_path / "run"
    assert main(["register", str(flat_dataset / "curves.csv"), "--ref", "0", "--config", str(config), "--out", str(run)]) == EXIT_OK
    assert main(["evaluate", str(run), "--sweep"]) == EXIT_OK
    sweep = pd.read_csv(run / "evaluation" / "prd_by_order.csv")
    assert list(sweep["order"]) == [10, 15]
    assert (sweep["kind"] == "fourier").all()
    assert (sweep["n_failed"] == 0).all()
    assert (sweep["prd_median"] < 1.0).all()


def test_evaluate_from_another_directory(tmp_path, flat_dataset, monkeypatch):
    run = tmp_path / "run"
    monkeypatch.chdir(flat_dataset)
    assert main(["register", "curves.csv", "--ref", "0", "--out", str(run)]) == EXIT_OK
    monkeypatch.chdir(tmp_path)
    assert main(["evaluate", str(run)]) == EXIT_OK
    manifest = json.loads((run / "manifest.json").read_text())
    assert manifest["arguments"]["curves"] == str((flat_dataset / "curves.csv").resolve())


@pytest.mark.slow
def test_f1_auto_power_run_converges(tmp_path):
    sim = tmp_path / "sim"
    run = tmp_path / "run"
    assert main(["simulate", "--preset", "f1-n2", "--seed", "7", "--out", str(sim)]) == EXIT_OK
    assert main(["register", str(sim / "curves.csv"), "--ref", "auto-power", "--out", str(run)]) == EXIT_OK
    results = pd.read_csv(run / "results.csv")
    assert len(results) == 21
    assert results["converged"].all()
