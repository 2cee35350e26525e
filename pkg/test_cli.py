"""
End-to-end tests of the riesz_lab command line
"""

import json

import pandas as pd
import pytest

from riesz_lab import run

NORM_HEADER = "tau,t,quantity,l,p,rescaled_value,physical_value"


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def header(path):
    return path.read_text().splitlines()[0]


def test_zero_data_simulation(tmp_path):
    out = tmp_path / "zero"
    code = run(["simulate", "--n", "32", "--tau-end", "0.2", "--n-amplitude", "0", "--out", str(out)])
    assert code == 0
    assert header(out / "norms.csv") == NORM_HEADER
    frame = pd.read_csv(out / "norms.csv")
    assert (frame["rescaled_value"] == 0).all()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["config"]["grid"]["n"] == 32


def test_simulation_is_byte_identical_across_runs(tmp_path):
    args = ["simulate", "--n", "64", "--tau-end", "0.3", "--seed", "1"]
    assert run(args + ["--out", str(tmp_path / "a")]) == 0
    assert run(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "norms.csv").read_bytes() == (tmp_path / "b" / "norms.csv").read_bytes()


def test_json_format_and_snapshots(tmp_path):
    out = tmp_path / "json"
    code = run(["simulate", "--n", "32", "--tau-end", "0.1", "--snapshot-every", "5",
                "--format", "json", "--out", str(out)])
    assert code == 0
    assert (out / "norms.json").exists()
    assert sorted(p.name for p in (out / "snapshots").glob("*.bin")) == [
        "snapshot_00000.bin", "snapshot_00001.bin", "snapshot_00002.bin",
    ]


def test_simulate_then_fit(tmp_path):
    sim = tmp_path / "sim"
    assert run(["simulate", "--n", "256", "--tau-end", "4", "--out", str(sim)]) == 0
    fit = tmp_path / "fit"
    code = run(["fit", "--series", str(sim / "norms.csv"), "--out", str(fit)])
    assert code in (0, 3)
    report = pd.read_csv(fit / "decay_report.csv")
    assert header(fit / "decay_report.csv").startswith("quantity,l,p,predicted_physical,predicted_rate")
    mass_row = report[report["quantity"] == "mass law"].iloc[0]
    assert mass_row["fitted_rate"] == pytest.approx(0.5, abs=1e-3)
    assert (report[report["quantity"] == "n"]["verdict"] == "pass").all()


def test_fit_without_config_or_manifest(tmp_path):
    series = tmp_path / "norms.csv"
    series.write_text(NORM_HEADER + "\n")
    assert run(["fit", "--series", str(series), "--out", str(tmp_path / "fit")]) == 1


def test_unknown_config_key(tmp_path):
    config = write_json(tmp_path / "bad.json", {"grid": {"d": 1, "n": 32}, "viscosity": 0.1})
    assert run(["simulate", "--config", config, "--out", str(tmp_path / "out")]) == 1


def test_malformed_json(tmp_path):
    config = tmp_path / "broken.json"
    config.write_text("{not json")
    assert run(["gronwall", "--config", str(config), "--out", str(tmp_path / "out")]) == 1


def test_missing_command():
    assert run([]) == 1


def test_blowup_exit_code(tmp_path):
    config = write_json(tmp_path / "cap.json", {"grid": {"d": 1, "n": 32}, "tau_end": 0.2, "blowup_amplitude": 1e-6})
    assert run(["simulate", "--config", config, "--out", str(tmp_path / "out")]) == 2


def test_gronwall_zero_initial_value(tmp_path):
    out = tmp_path / "gron"
    assert run(["gronwall", "--a", "2", "--cstar", "1", "--y0", "0", "--out", str(out)]) == 0
    assert header(out / "gronwall.csv") == "t,Y,envelope,margin"
    assert (pd.read_csv(out / "gronwall.csv")["Y"] == 0).all()


def test_gronwall_threshold(tmp_path):
    out = tmp_path / "gron"
    assert run(["gronwall", "--T", "100", "--threshold", "--out", str(out)]) == 0
    threshold = json.loads((out / "threshold.json").read_text())
    assert threshold["consistent"] is True
    assert threshold["M"] >= threshold["bootstrap_threshold"]


def test_gronwall_rejects_bad_exponent(tmp_path):
    assert run(["gronwall", "--a", "0.5", "--out", str(tmp_path / "out")]) == 1


def test_gronwall_sweep(tmp_path):
    sweep = write_json(tmp_path / "sweep.json", [{"Y0": 0.0}, {"Y0": 1e-3, "T": 100.0}])
    out = tmp_path / "sweep"
    assert run(["gronwall", "--sweep", sweep, "--out", str(out)]) == 0
    assert (out / "sweep_0" / "gronwall.csv").exists()
    assert (out / "sweep_1" / "gronwall.csv").exists()


def test_burgers_verify_writes_report(tmp_path):
    out = tmp_path / "burgers"
    code = run(["burgers-verify", "--n", "64", "--out", str(out)])
    assert code in (0, 3)
    assert header(out / "expansion_report.csv").startswith("t,sup_K,K_hdot_0_normalized")


def test_ineq_study(tmp_path):
    out = tmp_path / "ineq"
    code = run(["ineq", "--which", "tech1", "--n", "64", "--count", "10", "--max-mode", "8", "--out", str(out)])
    assert code in (0, 3)
    summary = pd.read_csv(out / "ineq_summary.csv")
    assert list(summary["name"]) == ["tech1"]
    assert (out / "ineq_tech1.csv").exists()


def test_ineq_unknown_name(tmp_path):
    assert run(["ineq", "--which", "young", "--out", str(tmp_path / "out")]) == 1


def test_fit_keeps_simulation_manifest(tmp_path):
    out = tmp_path / "run"
    assert run(["simulate", "--n", "64", "--tau-end", "0.5", "--out", str(out)]) == 0
    code = run(["fit", "--out", str(out)])
    assert code in (0, 3)
    assert json.loads((out / "manifest.json").read_text())["command"] == "simulate"
    assert json.loads((out / "fit_manifest.json").read_text())["command"] == "fit"
    assert (out / "decay_report.csv").exists()


def test_fit_reads_series_in_manifest_format(tmp_path):
    out = tmp_path / "run"
    assert run(["simulate", "--n", "64", "--tau-end", "0.5", "--format", "json", "--out", str(out)]) == 0
    assert not (out / "norms.csv").exists()
    assert json.loads((out / "manifest.json").read_text())["format"] == "json"
    assert run(["fit", "--out", str(out)]) in (0, 3)
    report = pd.read_csv(out / "decay_report.csv")
    assert "mass law" in set(report["quantity"])


def test_cfl_abort_keeps_partial_series(tmp_path):
    config = write_json(tmp_path / "fast.json", {
        "grid": {"d": 1, "n": 32}, "dt": 0.5, "tau_end": 1.0, "initial": {"w_amplitude": 1.0},
    })
    out = tmp_path / "out"
    assert run(["simulate", "--config", config, "--out", str(out)]) == 4
    frame = pd.read_csv(out / "norms.csv")
    assert (frame["tau"] == 0).all()
    assert len(frame) > 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert "CFL" in manifest["aborted"]
    assert manifest["abort_tau"] == 0


def test_failed_verdict_reports_reason(tmp_path, capsys):
    out = tmp_path / "gron"
    assert run(["gronwall", "--a", "2", "--cstar", "1", "--y0", "10", "--T", "100", "--out", str(out)]) == 3
    assert "leaves the envelope" in capsys.readouterr().err
    assert (out / "gronwall.csv").exists()


def test_snapshots_load_back(tmp_path):
    from src.storage import ResultsStore

    out = tmp_path / "snap"
    assert run(["simulate", "--n", "32", "--tau-end", "0.1", "--snapshot-every", "5", "--out", str(out)]) == 0
    state = ResultsStore.load_snapshot(out / "snapshots" / "snapshot_00001.bin")
    assert state.tau == pytest.approx(0.05)
    assert state.grid.n == 32
    assert state.N.values.shape == (32,)
    assert state.N.values.max() > 0
