import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cavityphoton import adiabaticity_threshold
from cavityphoton.cli import main
from cavityphoton.config import (ConfigError, config_echo, frequency_rad_per_s,
                                 parse_config)
from cavityphoton.io import (SWEEP_COLUMNS, TRAJECTORY_COLUMNS,
                             read_summary_json, read_trajectory_csv)

OMEGA0_REF = 2.42e6 * 2.0 * math.pi
T_REF = 5.0e-5

# coarse-step schedule keeps CLI tests fast while staying accurate to ~1e-5
FAST_SCHEDULE = {"dt": T_REF * 2.0e-5, "record_stride": 50}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


class TestConfigParsing:
    def test_defaults(self):
        cfg = parse_config({})
        assert cfg.pulse.omega0 == pytest.approx(OMEGA0_REF, rel=1e-15)
        assert cfg.pulse.T == T_REF
        assert cfg.system.g == pytest.approx(OMEGA0_REF / 4.0, rel=1e-15)
        assert cfg.system.delta == 0.0
        assert cfg.system.gamma == 0.0
        assert cfg.schedule.n_steps == 5_000_000

    def test_unit_conversions_agree(self):
        tagged = parse_config({"pulse": {"omega0": {"value": 2.42,
                                                    "unit": "MHz-times-2pi"}}})
        plain = parse_config({"pulse": {"omega0": {"value": 1.5205e7,
                                                   "unit": "rad/s"}}})
        angular = parse_config({"pulse": {"omega0": {"value": 15.205,
                                                     "unit": "MHz-angular"}}})
        assert tagged.pulse.omega0 == pytest.approx(plain.pulse.omega0, rel=1e-4)
        assert angular.pulse.omega0 == pytest.approx(plain.pulse.omega0, rel=1e-12)

    def test_missing_unit_tag_rejected(self):
        with pytest.raises(ConfigError, match="unit"):
            parse_config({"pulse": {"omega0": 1.5e7}})
        with pytest.raises(ConfigError, match="unknown unit"):
            frequency_rad_per_s({"value": 1.0, "unit": "MHz"}, "x")

    def test_exactly_one_coupling_spec(self):
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config({"system": {"g": {"value": 1e6, "unit": "rad/s"},
                                     "g_over_omega0": 0.25}})

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            parse_config({"pulse": {"omega_zero": 1.0}})
        with pytest.raises(ConfigError, match="unknown keys"):
            parse_config({"misc": {}})

    def test_invalid_physics_rejected(self):
        with pytest.raises(ConfigError):
            parse_config({"pulse": {"T": -1.0}})
        with pytest.raises(ConfigError):
            parse_config({"system": {"gamma": -5.0}})

    def test_echo_round_trips_resolved_values(self):
        cfg = parse_config({"system": {"gamma": 2.5e4}})
        echo = config_echo(cfg)
        assert echo["gamma"] == 2.5e4
        assert echo["gamma_t"] == 2.5e4
        assert echo["dt"] == cfg.schedule.dt


class TestBoundCommand:
    def test_reference_figures(self, capsys):
        assert main(["bound"]) == 0
        out = capsys.readouterr().out
        assert "190.07" in out
        assert "1.893" in out

    def test_threshold_at_weak_coupling(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"system": {"g_over_omega0": 0.02}})
        assert main(["bound", "--config", cfg]) == 0
        assert "3.4709e-08" in capsys.readouterr().out

    def test_width_bound_equals_pump_width_at_special_ratio(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, {"system": {"g_over_omega0": 1.0 / math.sqrt(8.0)}})
        assert main(["bound", "--config", cfg]) == 0
        out = capsys.readouterr().out
        bound = float(out.split("photon width bound")[1].split("=")[1].split("s")[0])
        pump = float(out.split("pump pulse FWHM")[1].split("=")[1].split("s")[0])
        assert bound == pytest.approx(pump, rel=1e-4)

    def test_invalid_config_exits_nonzero(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"pulse": {"T": 0.0}})
        assert main(["bound", "--config", cfg]) == 2
        assert "error" in capsys.readouterr().err


class TestSimulateCommand:
    def test_reference_decay_run(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "system": {"gamma": 2.5e4},
            "schedule": FAST_SCHEDULE,
            "output": {"dir": str(tmp_path / "out")},
        })
        assert main(["simulate", "--config", cfg]) == 0
        summary = read_summary_json(tmp_path / "out" / "summary.json")
        assert summary["eta"] == pytest.approx(0.84720, abs=1e-3)
        assert summary["delta_t"] == pytest.approx(7.0393e-5, rel=1e-3)
        assert summary["t_max"] == pytest.approx(-3.0173e-5, rel=1e-3)
        assert summary["config"]["gamma"] == 2.5e4
        assert len(summary["final_populations"]) == 4
        assert summary["adiabaticity_margin"] > 100.0

    def test_lossless_defaults_run(self, tmp_path):
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "output": {"dir": str(tmp_path / "out")},
        })
        assert main(["simulate", "--config", cfg]) == 0
        summary = read_summary_json(tmp_path / "out" / "summary.json")
        assert summary["delta_t"] == pytest.approx(9.4653e-5, rel=1e-3)
        assert abs(summary["t_max"]) <= 1e-7
        assert summary["eta"] == 0.0

    def test_summary_round_trip_lossless(self, tmp_path):
        cfg = write_config(tmp_path, {
            "system": {"gamma": 2.5e4},
            "schedule": FAST_SCHEDULE,
            "output": {"dir": str(tmp_path / "out")},
        })
        main(["simulate", "--config", cfg])
        path = tmp_path / "out" / "summary.json"
        first = read_summary_json(path)
        path.write_text(json.dumps(first), encoding="utf-8")
        second = read_summary_json(path)
        assert first == second
        assert isinstance(first["eta"], float)

    def test_trajectory_csv_round_trip(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {
            "system": {"gamma": 2.5e4},
            "schedule": {"dt": T_REF * 2.0e-5, "record_stride": 500},
            "output": {"dir": str(out)},
        })
        main(["simulate", "--config", cfg])
        cols = read_trajectory_csv(out / "trajectory.csv")
        assert list(cols) == TRAJECTORY_COLUMNS
        pops = cols["pop_u0"] + cols["pop_e0"] + cols["pop_g1"] + cols["pop_g0"]
        np.testing.assert_allclose(pops, 1.0, atol=1e-9)
        np.testing.assert_allclose(cols["P_t"], 2.5e4 * cols["pop_g1"],
                                   rtol=1e-15)

    def test_validation_error_exit(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"pulse": {"T": -2.0}})
        assert main(["simulate", "--config", cfg]) == 2
        assert "error" in capsys.readouterr().err

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_adiabaticity_warning_not_fatal(self, tmp_path, capsys):
        # a fast pulse also leaves residual population, so the truncated-
        # window RuntimeWarning from the efficiency integral is expected
        threshold = adiabaticity_threshold(OMEGA0_REF, OMEGA0_REF / 4.0)
        cfg = write_config(tmp_path, {
            "pulse": {"T": 8.0 * threshold},
            "schedule": {"record_stride": 10},
            "output": {"dir": str(tmp_path / "out")},
        })
        assert main(["simulate", "--config", cfg]) == 0
        assert "adiabaticity" in capsys.readouterr().err

    def test_out_dir_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CAVITYPHOTON_OUT", str(tmp_path / "envdir"))
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "output": {"dir": str(tmp_path / "ignored")},
        })
        assert main(["simulate", "--config", cfg]) == 0
        assert (tmp_path / "envdir" / "summary.json").exists()
        assert not (tmp_path / "ignored").exists()

    def test_cli_out_flag_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CAVITYPHOTON_OUT", str(tmp_path / "envdir"))
        cfg = write_config(tmp_path, {"schedule": FAST_SCHEDULE})
        assert main(["simulate", "--config", cfg,
                     "--out", str(tmp_path / "flagdir")]) == 0
        assert (tmp_path / "flagdir" / "summary.json").exists()


class TestSweepCommand:
    def test_gamma_sweep_table(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "sweep": {"variable": "gamma", "grid": [0.0, 1e4, 2e4, 3e4]},
            "output": {"dir": str(out)},
        })
        assert main(["sweep", "--config", cfg]) == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert len(lines) == 5
        rows = [line.split(",") for line in lines[1:]]
        widths = [float(r[SWEEP_COLUMNS.index("delta_t")]) for r in rows]
        assert all(b < a for a, b in zip(widths, widths[1:]))
        assert all(r[SWEEP_COLUMNS.index("error")] == "" for r in rows)

    def test_json_format(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "sweep": {"variable": "gamma", "min": 0.0, "max": 2e4, "count": 2},
            "output": {"dir": str(out)},
        })
        assert main(["sweep", "--config", cfg, "--format", "json"]) == 0
        rows = json.loads((out / "sweep.json").read_text())
        assert [r["value"] for r in rows] == [0.0, 2e4]
        assert rows[1]["eta"] > 0.5
        assert rows[0]["error"] is None

    def test_missing_section_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"schedule": FAST_SCHEDULE})
        assert main(["sweep", "--config", cfg]) == 2
        assert "sweep" in capsys.readouterr().err


class TestFitCommands:
    def test_fit_a_reference(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "fit_a": {"min": 0.0, "max": 3.6e5, "count": 10},
            "output": {"dir": str(out)},
        })
        assert main(["fit-a", "--config", cfg]) == 0
        payload = json.loads((out / "fit_a.json").read_text())
        assert payload["parameters"]["a"] == pytest.approx(1.5029, rel=2e-2)
        assert payload["g_over_omega0"] == pytest.approx(0.25, rel=1e-12)
        assert len(payload["grid"]) == 10

    def test_fit_a_degenerate_grid(self, tmp_path, capsys):
        # two gamma values are enough to sweep but not to identify the exponent
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "fit_a": {"gamma_grid": [0.0, 2.5e4]},
            "output": {"dir": str(tmp_path / "out")},
        })
        assert main(["fit-a", "--config", cfg]) == 2
        assert "at least 3" in capsys.readouterr().err

    def test_fit_a_single_point_grid(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "fit_a": {"gamma_grid": [2.5e4]},
            "output": {"dir": str(tmp_path / "out")},
        })
        assert main(["fit-a", "--config", cfg]) == 2
        assert "grid" in capsys.readouterr().err

    def test_fit_poly_small_grid(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {
            "schedule": FAST_SCHEDULE,
            "fit_poly": {"ratio_grid": [0.2, 0.35, 0.6], "degree": 1},
            "output": {"dir": str(out)},
        })
        assert main(["fit-poly", "--config", cfg]) == 0
        payload = json.loads((out / "fit_poly.json").read_text())
        assert set(payload["parameters"]) == {"b0", "b1"}
        avals = payload["a_values"]
        assert all(b < a for a, b in zip(avals, avals[1:]))
        # average slope of ln a over this ratio window is near -1
        assert -1.5 < payload["parameters"]["b1"] < -0.5


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "cavityphoton.cli", "bound"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "190.07" in proc.stdout
