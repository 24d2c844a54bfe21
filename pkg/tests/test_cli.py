import math
import subprocess
import sys

import numpy as np
import pytest

from chaostda import cli
from chaostda.pipeline import read_csv
from chaostda.timeseries import TimeSeries


def test_parse_values():
    assert cli.parse_value("snrs", "inf, 40,20") == (math.inf, 40.0, 20.0)
    assert cli.parse_value("tests", "ps,opn") == ("ps", "opn")
    assert cli.parse_value("trials", "3") == 3
    assert cli.parse_value("opn_tau", "None") is None
    assert cli.parse_value("opn_tau", "12") == 12
    assert cli.parse_value("system", "rossler") == "rossler"
    assert cli.parse_value("fmax_threshold", "0.05") == 0.05
    with pytest.raises(ValueError):
        cli.parse_value("trials", "many")


def test_read_config(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text("# comment\nsystem = rossler\nparams = 0.25, 0.5\n\nn-c = 7  # inline\n")
    assert cli.read_config(path) == {"system": "rossler", "params": (0.25, 0.5), "n_c": 7}
    path.write_text("colour = red\n")
    with pytest.raises(cli.UsageError):
        cli.read_config(path)


def test_series_round_trip(tmp_path):
    ts = TimeSeries(np.sin(np.arange(50) * 0.3) + 1 / 3, 0.01, 100.0)
    back = cli.read_series(cli.write_series(ts, tmp_path / "s.csv"))
    np.testing.assert_array_equal(back.samples, ts.samples)
    assert back.dt == pytest.approx(0.01, rel=1e-12)
    assert back.t0 == 100.0


def test_exit_codes(tmp_path, capsys):
    assert cli.run(["sweep", "--bogus"]) == 1
    assert cli.run(["sweep", "--trials", "zero"]) == 1
    assert cli.run(["sweep", "--trials", "0"]) == 1
    assert cli.run(["sweep", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert cli.run(["test01", str(tmp_path / "missing.csv")]) == 2
    assert cli.run([]) == 1
    capsys.readouterr()


def test_simulate_then_test(tmp_path, capsys):
    out = tmp_path / "o"
    assert cli.run(["simulate", "--system", "lorenz", "--value", "181.2", "--duration", "300",
                    "--out-dir", str(out)]) == 0
    series = out / "series.csv"
    assert series.exists()
    capsys.readouterr()
    assert cli.run(["test01", str(series), "--n-c", "10"]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("score=") and line.endswith("verdict=periodic")
    assert cli.run(["opntest", str(series)]) == 0
    assert "verdict=periodic" in capsys.readouterr().out
    assert cli.run(["pstest", str(series), "--ps-ensemble", "5", "--n-samples", "1000",
                    "--seed", "2"]) == 0
    assert "verdict=" in capsys.readouterr().out


def test_noise_command(tmp_path, capsys):
    assert cli.run(["noise", "--alpha", "2", "--length", "1024", "--seed", "4",
                    "--out-dir", str(tmp_path)]) == 0
    x = cli.read_series(tmp_path / "noise.csv").samples
    assert x.size == 1024
    assert np.sqrt(np.mean(x ** 2)) == pytest.approx(1.0)
    assert cli.run(["noise", "--alpha", "3", "--out-dir", str(tmp_path)]) == 2


def test_sweep_command_with_config(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("system = lorenz\nparams = 181.2\nalphas = 0\nsnrs = inf, 30\n"
                   "duration = 60\nn_c = 5\nn_samples = 600\nps_ensemble = 3\n"
                   "grid_resolution = 32\nopn_length = 20000\n")
    out = tmp_path / "run"
    assert cli.run(["sweep", "--config", str(cfg), "--seed", "9", "--tests", "zero_one,opn",
                    "--out-dir", str(out)]) == 0
    res = read_csv(out / "results.csv")
    assert len(res) == 4
    assert {r.test for r in res.rows} == {"zero_one", "opn"}
    assert (out / "opn_alpha0.svg").exists()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "chaostda", "noise", "--length", "64",
                           "--out-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    bad = subprocess.run([sys.executable, "-m", "chaostda", "frobnicate"],
                         capture_output=True, text=True)
    assert bad.returncode == 1
