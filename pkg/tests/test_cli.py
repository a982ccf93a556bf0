"""Command-line interface: parsing, modes, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from oscar_sim.cli import (EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK,
                           format_complex, load_config_file, main,
                           parse_complex)
from oscar_sim.errors import ConfigError


class TestParsing:
    @pytest.mark.parametrize("text,value", [
        ("3", 3 + 0j),
        ("4i", 4j),
        ("0+4i", 4j),
        ("1.5-2i", 1.5 - 2j),
        ("-1e-3+0.5i", -1e-3 + 0.5j),
        ("-2i", -2j),
    ])
    def test_parse_complex(self, text, value):
        assert parse_complex(text) == value

    def test_parse_complex_rejects_garbage(self):
        with pytest.raises(ConfigError):
            parse_complex("fish")

    def test_format_roundtrip(self):
        for z in (3 + 0j, 4j, 1.5 - 2j, -0.001 + 0.5j):
            assert parse_complex(format_complex(z)) == z

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("""
# benchmark point
gamma = 1e-4
chi = 0.5
kappa_over_gamma = 0.08   # readout coupling
N = 100
alpha = 4i
beta = 3
""")
        parsed = load_config_file(cfg)
        assert parsed["gamma"] == "1e-4"
        assert parsed["alpha"] == "4i"

    def test_config_file_rejects_bad_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("gamma 1e-4\n")
        with pytest.raises(ConfigError):
            load_config_file(cfg)


class TestExitCodes:
    def test_missing_time_scale(self, tmp_path):
        rc = main(["phase", "--out", str(tmp_path), "--gamma", "0.1",
                   "--chi", "0.5", "--kappa-over-gamma", "0.1", "--N", "1",
                   "--beta", "1", "--times", "1.0"])
        assert rc == EXIT_CONFIG

    def test_both_parameter_blocks(self, tmp_path):
        rc = main(["phase", "--out", str(tmp_path), "--gamma", "0.1",
                   "--chi", "0.5", "--kappa-over-gamma", "0.1", "--N", "1",
                   "--omega-c", "1e4", "--beta", "1",
                   "--times", "1.0", "--time-scale", "tau"])
        assert rc == EXIT_CONFIG

    def test_numerical_error_exit(self, tmp_path):
        # a cutoff far too small for beta = 3 trips the truncation guard
        rc = main(["phase", "--out", str(tmp_path), "--gamma", "1e-4",
                   "--chi", "0.5", "--kappa-over-gamma", "0.08", "--N", "100",
                   "--beta", "3", "--n-max", "10",
                   "--times", "0", "--time-scale", "tau"])
        assert rc == EXIT_NUMERICAL

    def test_ok(self, tmp_path):
        rc = main(["phase", "--out", str(tmp_path), "--gamma", "0.1",
                   "--chi", "0.5", "--kappa-over-gamma", "0.1", "--N", "1",
                   "--beta", "1", "--alpha", "i",
                   "--times", "0.5", "--time-scale", "tau", "--grid", "64"])
        assert rc == EXIT_OK


class TestModes:
    def test_params_mode(self, tmp_path):
        rc = main(["params", "--out", str(tmp_path),
                   "--omega-c", "34557.5", "--omega-r", "6.2832e10",
                   "--k-c", "1e-4", "--B1", "1.5701e-4",
                   "--dBz-dz", "8.2254e4", "--L", "0.025",
                   "--T", "2.652e-5", "--Q", "1e4"])
        assert rc == EXIT_OK
        data = json.loads((tmp_path / "params.json").read_text())
        assert data["dimensionless"]["epsilon"] == pytest.approx(800.0, rel=1e-3)
        assert 5e-6 <= data["dimensionless"]["chi"] <= 2e-5

    def test_params_with_conditions(self, tmp_path):
        rc = main(["params", "--out", str(tmp_path), "--gamma", "1e-4",
                   "--chi", "0.5", "--kappa-over-gamma", "0.08", "--N", "100",
                   "--alpha", "4i", "--beta", "3",
                   "--times", "8", "--time-scale", "tau"])
        assert rc == EXIT_OK
        data = json.loads((tmp_path / "params.json").read_text())
        cond = data["conditions"][0]["conditions"]
        assert cond["distinguishability"]["ratio"] == pytest.approx(4e4)

    def test_phase_beta_zero_uniform_no_peaks(self, tmp_path):
        rc = main(["phase", "--out", str(tmp_path), "--gamma", "0.1",
                   "--chi", "0.5", "--kappa-over-gamma", "0.1", "--N", "1",
                   "--beta", "0", "--alpha", "i",
                   "--times", "1.0", "--time-scale", "tau", "--grid", "64"])
        assert rc == EXIT_OK
        csvs = list(tmp_path.glob("phase_*.csv"))
        assert len(csvs) == 1
        side = json.loads(csvs[0].with_suffix(".json").read_text())
        assert side["peaks"] == []
        values = [float(line.split(",")[1])
                  for line in csvs[0].read_text().splitlines()[1:]]
        assert np.allclose(values, 1 / (2 * math.pi), atol=1e-12)

    def test_time_scale_t_conversion(self, tmp_path):
        # tau = gamma * t: t = 10 at gamma = 0.1 equals tau = 1
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        base = ["--gamma", "0.1", "--chi", "0.5", "--kappa-over-gamma", "0.1",
                "--N", "1", "--beta", "1", "--alpha", "i", "--grid", "64"]
        assert main(["phase", "--out", str(out_a), *base,
                     "--times", "10", "--time-scale", "t"]) == EXIT_OK
        assert main(["phase", "--out", str(out_b), *base,
                     "--times", "1.0", "--time-scale", "tau"]) == EXIT_OK
        csv_a = next(out_a.glob("*.csv")).read_text()
        csv_b = next(out_b.glob("*.csv")).read_text()
        assert csv_a == csv_b

    def test_evolve_mode(self, tmp_path):
        rc = main(["evolve", "--out", str(tmp_path), "--gamma", "0.1",
                   "--chi", "0.5", "--kappa-over-gamma", "0.1", "--N", "1",
                   "--beta", "1", "--alpha", "i", "--keys", "0,0,e;2,1,g",
                   "--times", "0.0,0.5,1.0", "--time-scale", "tau"])
        assert rc == EXIT_OK
        lines = (tmp_path / "coefficients.csv").read_text().splitlines()
        assert lines[0].startswith("tau,branch,n,m,re_A")
        assert len(lines) == 1 + 2 * 3

    def test_fig2_two_peak_summary(self, tmp_path):
        rc = main(["fig2", "--out", str(tmp_path), "--N", "100"])
        assert rc == EXIT_OK
        summary = json.loads((tmp_path / "fig2_summary.json").read_text())
        runs = [r for r in summary["runs"]
                if r["chi"] == 0.5 and r["tau"] > 0]
        assert len(runs) == 1
        assert runs[0]["n_peaks"] == 2
        assert runs[0]["distinguishability"] > 1.0

    def test_fig3_summary_nonmonotonic(self, tmp_path):
        rc = main(["fig3", "--out", str(tmp_path)])
        assert rc == EXIT_OK
        summary = json.loads((tmp_path / "fig3_summary.json").read_text())
        by_kog = {r["kappa_over_gamma"]: r for r in summary["runs"]}
        assert by_kog[0.08]["resolved"] is True
        assert by_kog[0.04]["resolved"] is False
        assert by_kog[0.12]["resolved"] is False

    def test_sweep_mode(self, tmp_path):
        rc = main(["sweep", "--out", str(tmp_path), "--gamma", "1e-4",
                   "--chi", "0.5", "--kappa-over-gamma", "0.08", "--N", "100",
                   "--alpha", "4i", "--beta", "3", "--param",
                   "kappa_over_gamma", "--values", "0.04,0.08",
                   "--times", "80000", "--time-scale", "tau"])
        assert rc == EXIT_OK
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        assert lines[0] == "kappa_over_gamma,tau,n_peaks,distinguishability"
        assert len(lines) == 3

    def test_every_csv_has_sidecar(self, tmp_path):
        main(["fig3", "--out", str(tmp_path)])
        for csv in tmp_path.glob("*.csv"):
            sidecar = csv.with_suffix(".json")
            assert sidecar.exists()
            payload = json.loads(sidecar.read_text())
            assert "config" in payload

    def test_validate_adiabatic_mode(self, tmp_path):
        rc = main(["validate-adiabatic", "--out", str(tmp_path),
                   "--d-c", "36", "--d-r", "3", "--t-final", "0.25",
                   "--epsilons", "2,4"])
        assert rc == EXIT_OK
        data = json.loads((tmp_path / "validate_adiabatic.json").read_text())
        assert len(data["reports"]) == 2
        assert data["reports"][0]["chi_model"] == pytest.approx(0.2)
        assert "phase_discrepancy_decreasing" in data

    def test_oracle_compare_mode(self, tmp_path):
        # reduced cutoffs keep this quick; the acceptance suite runs the
        # full-size instance
        rc = main(["oracle-compare", "--out", str(tmp_path),
                   "--d-c", "30", "--d-r", "8",
                   "--times", "0.5,1.0", "--time-scale", "tau",
                   "--grid", "256"])
        assert rc == EXIT_OK
        data = json.loads((tmp_path / "oracle_compare.json").read_text())
        assert data["report"]["passed"] is True
        assert max(data["report"]["linf_phase"]) < 1e-3
        for branch in ("e", "g"):
            traj = tmp_path / f"oracle_trajectory_{branch}.csv"
            assert traj.exists()
            header = traj.read_text().splitlines()[0]
            assert header.startswith("t,trace_error,min_eigenvalue")


class TestEnvironment:
    def test_thread_cap_respected(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OSCAR_SIM_THREADS", "2")
        rc = main(["sweep", "--out", str(tmp_path), "--gamma", "1e-4",
                   "--chi", "0.5", "--kappa-over-gamma", "0.08", "--N", "100",
                   "--alpha", "4i", "--beta", "3", "--param", "N",
                   "--values", "100,10000", "--times", "80000",
                   "--time-scale", "tau"])
        assert rc == EXIT_OK
        sidecar = json.loads((tmp_path / "sweep.json").read_text())
        assert sidecar["config"]["threads"] == 2

    def test_bad_thread_env_rejected(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OSCAR_SIM_THREADS", "many")
        rc = main(["phase", "--out", str(tmp_path), "--gamma", "0.1",
                   "--chi", "0.5", "--kappa-over-gamma", "0.1", "--N", "1",
                   "--beta", "1", "--times", "1", "--time-scale", "tau"])
        assert rc == EXIT_CONFIG


class TestDeterminism:
    def test_identical_config_identical_bytes(self, tmp_path):
        args = ["--gamma", "1e-4", "--chi", "0.5", "--kappa-over-gamma",
                "0.08", "--N", "100", "--alpha", "4i", "--beta", "3",
                "--times", "0,80000", "--time-scale", "tau"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["phase", "--out", str(out_a), *args]) == EXIT_OK
        assert main(["phase", "--out", str(out_b), *args]) == EXIT_OK
        for csv_a in sorted(out_a.glob("*.csv")):
            csv_b = out_b / csv_a.name
            assert csv_a.read_bytes() == csv_b.read_bytes()

    def test_formatting_12_digits(self, tmp_path):
        main(["phase", "--out", str(tmp_path), "--gamma", "0.1", "--chi",
              "0.5", "--kappa-over-gamma", "0.1", "--N", "1", "--beta", "1",
              "--times", "1", "--time-scale", "tau", "--grid", "64"])
        body = next(tmp_path.glob("*.csv")).read_text()
        token = body.splitlines()[1].split(",")[0]
        assert token == f"{-math.pi:.12g}"
