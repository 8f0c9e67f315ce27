from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from framelab.cli import dumps, main, run, sweep, validate_config
from framelab.constructions import bump_psi_m
from framelab.errors import ConfigError
from framelab.frames import frame_bound_report
from framelab.grids import DyadicAnnulusGrid

BUMP = {"construction": {"name": "bump", "a": 0.25, "m": 100}, "analysis": "frame-bounds"}


def _write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc, indent=2))
    return str(path)


def _run(tmp_path, doc, *extra, command="run"):
    out = tmp_path / "out.json"
    code = main([command, "--config", _write(tmp_path, doc), "--json", str(out), *extra])
    return code, (json.loads(out.read_text()) if code == 0 else None)


class TestValidateConfig:
    def test_minimal(self):
        cfg = validate_config(json.dumps(BUMP))
        assert cfg.construction == "bump" and cfg.params == {"a": 0.25, "m": 100}
        assert cfg.analysis == "frame-bounds" and cfg.sweep is None

    def test_unknown_key_named_with_line(self):
        text = '{\n  "construction": {"name": "bump", "a": 0.25,\n    "mm": 100}\n}'
        with pytest.raises(ConfigError, match=r"'mm'.*line 3"):
            validate_config(text)

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="samples"):
            validate_config(json.dumps({**BUMP, "samples": 3}))

    def test_small_m_parses(self):
        cfg = validate_config(json.dumps({"construction": {"name": "bump", "a": 0.25, "m": 20}}))
        assert cfg.params["m"] == 20

    @pytest.mark.parametrize("doc", [
        "{not json",
        {"construction": {"name": "wavelet"}},
        {**BUMP, "analysis": "plot"},
        {**BUMP, "grid": {"norm": "l1"}},
        {**BUMP, "grid": {"samples_per_dim": 0}},
        {**BUMP, "sweep": {"param": "m", "values": []}},
        {**BUMP, "sweep": {"param": "q", "values": [1]}},
        {**BUMP, "analysis": "sweep"},
        {"construction": {"name": "bump", "a": 0.25, "m": "100"}},
    ])
    def test_rejects(self, doc):
        with pytest.raises(ConfigError):
            validate_config(doc if isinstance(doc, str) else json.dumps(doc))

    def test_non_finite_sweep_value(self):
        with pytest.raises(ConfigError):
            validate_config('{"construction": {"name": "bump", "a": 0.25, "m": 50},'
                            ' "sweep": {"param": "m", "values": [50, NaN]}}')

    def test_config_echo_round_trips(self):
        doc = {"construction": {"name": "convolved", "a": 0.25, "m": 64,
                                "mollifier": {"shape": "triangle", "b": 1, "c": 1}},
               "analysis": "sweep", "grid": {"samples_per_dim": 2048},
               "sweep": {"param": "m", "values": [64, 128]}, "k_radius": 2}
        cfg = validate_config(json.dumps(doc))
        echo = run(validate_config(json.dumps(BUMP)), samples=1024)["config"]
        assert validate_config(json.dumps(cfg.to_dict())) == cfg
        assert validate_config(json.dumps(echo)) == validate_config(json.dumps(BUMP))


class TestExitCodes:
    def test_config_error(self, tmp_path, capsys):
        assert main(["run", "--config", _write(tmp_path, '{"construction": {"name": "bump", "mm": 1}}')]) == 2
        assert "mm" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "absent.json")]) == 2

    def test_construction_error(self, tmp_path, capsys):
        doc = {"construction": {"name": "bump", "a": 0.25, "m": 20}}
        assert main(["run", "--config", _write(tmp_path, doc)]) == 3
        assert "invalid-params" in capsys.readouterr().err

    def test_analysis_error(self, tmp_path):
        doc = {"construction": {"name": "indicator", "region": {"intervals": [[-0.5, 0.5]]}},
               "analysis": "frame-bounds"}
        assert main(["run", "--config", _write(tmp_path, doc)]) == 4

    def test_stdout(self, tmp_path, capsys):
        assert main(["run", "--config", _write(tmp_path, BUMP), "--grid-samples", "1024"]) == 0
        assert set(json.loads(capsys.readouterr().out)) == {"tool", "version", "config", "analysis", "result"}

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "framelab", "run", "--config", _write(tmp_path, BUMP),
                               "--grid-samples", "512"], capture_output=True, text=True)
        assert proc.returncode == 0 and "K_upper" in proc.stdout


class TestRunExamples:
    def test_bump_frame_bounds(self, tmp_path):
        code, doc = _run(tmp_path, BUMP)
        r = doc["result"]
        assert code == 0
        assert r["K_lower"] == pytest.approx(0.4543, abs=2e-3)
        assert 1.0 <= r["K_upper"] <= 1 + 1e-12
        assert doc["tool"] == "framelab" and doc["version"]

    def test_radial_parseval(self, tmp_path):
        code, doc = _run(tmp_path, {"construction": {"name": "radial", "a": 0.2, "delta": 0.05, "d": 2},
                                    "analysis": "parseval"})
        assert code == 0 and doc["result"]["ok"] is True
        assert doc["result"]["grid"]["norm"] == "euclid"

    def test_shannon_delta(self, tmp_path):
        code, doc = _run(tmp_path, {"construction": {"name": "indicator", "region": "shannon"},
                                    "analysis": "delta-separation"})
        assert code == 0 and doc["result"]["delta_separation"] == 0

    def test_tiling_defect(self, tmp_path):
        code, doc = _run(tmp_path, {"construction": {"name": "indicator",
                                                     "region": {"name": "annular_square", "a": 0.2}},
                                    "analysis": "tiling-defect", "grid": {"samples_per_dim": 128}})
        assert code == 0
        assert doc["result"]["under_fraction"] <= 4 / np.sqrt(doc["result"]["samples"])

    def test_kappa_profile_reports_extremisers(self, tmp_path):
        code, doc = _run(tmp_path, {"construction": {"name": "g2d", "a": 0.2, "delta": 0.04},
                                    "analysis": "kappa-profile", "grid": {"samples_per_dim": 128}})
        r = doc["result"]
        assert code == 0 and len(r["argmin"]) == 2
        assert r["K_upper"] == pytest.approx(1, abs=1e-9)


class TestCsvAndDeterminism:
    def test_csv_format(self, tmp_path):
        csv = tmp_path / "k.csv"
        code = main(["run", "--config", _write(tmp_path, {"construction": {"name": "f2d", "a": 0.2, "delta": 0.04},
                                                          "analysis": "kappa-profile"}),
                     "--csv", str(csv), "--json", str(tmp_path / "o.json"), "--grid-samples", "32"])
        assert code == 0
        raw = csv.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode().splitlines()
        assert lines[0] == "gamma_1,gamma_2,kappa"
        rows = np.loadtxt(csv, delimiter=",", skiprows=1)
        assert rows.shape[1] == 3 and len(rows) == len(lines) - 1
        assert np.max(np.abs(rows[:, 2] - 1)) <= 1e-9
        # 17 significant digits round-trip floats exactly
        g = DyadicAnnulusGrid(0.2, 32, 2).points()
        assert np.array_equal(rows[:, :2], g)

    def test_byte_identical(self, tmp_path):
        doc = {"construction": {"name": "bump", "a": 0.25, "m": 60}, "analysis": "kappa-profile"}
        cfg = _write(tmp_path, doc)
        outs = []
        for i in range(2):
            j, c = tmp_path / f"r{i}.json", tmp_path / f"r{i}.csv"
            assert main(["run", "--config", cfg, "--json", str(j), "--csv", str(c), "--grid-samples", "2048"]) == 0
            outs.append((j.read_bytes(), c.read_bytes()))
        assert outs[0] == outs[1]


class TestSweep:
    def test_bump_sweep_matches_library(self):
        cfg = validate_config(json.dumps({**BUMP, "analysis": "sweep",
                                          "sweep": {"param": "m", "values": [50, 100, 200, 400]}}))
        doc = sweep(cfg)
        assert [r["value"] for r in doc["results"]] == [50, 100, 200, 400]
        for row in doc["results"]:
            p = bump_psi_m(0.25, row["value"])
            want = frame_bound_report(p, DyadicAnnulusGrid.for_profile(p, 0.25))
            assert row["report"]["K_upper"] == want.K_upper
            assert row["K_upper_minus_1"] == want.K_upper - 1
            assert row["report"]["K_lower"] <= 0.5
        ups = [r["K_upper_minus_1"] for r in doc["results"]]
        assert all(x >= y for x, y in zip(ups, ups[1:]))

    def test_bump_sweep_excess_below_threshold(self):
        cfg = validate_config(json.dumps({**BUMP, "sweep": {"param": "m", "values": [50, 100, 200, 400]}}))
        excess = [r["K_upper_minus_1"] for r in sweep(cfg)["results"]]
        assert all(e <= 1e-12 for e in excess), excess

    def test_convolved_gap_persists(self, tmp_path):
        code, doc = _run(tmp_path, {"construction": {"name": "convolved", "a": 0.25, "m": 64},
                                    "sweep": {"param": "m", "values": [64, 128, 256, 512]}}, command="sweep")
        assert code == 0
        assert all(r["report"]["K_upper"] >= 1.0605 for r in doc["results"])

    def test_f2d_delta_sweep(self, tmp_path):
        code, doc = _run(tmp_path, {"construction": {"name": "f2d", "a": 0.2, "delta": 0.04},
                                    "analysis": "parseval", "grid": {"samples_per_dim": 256},
                                    "sweep": {"param": "delta", "values": [0.01, 0.02, 0.04]}}, command="sweep")
        assert code == 0
        assert [r["value"] for r in doc["results"]] == [0.01, 0.02, 0.04]
        assert all(r["report"]["ok"] for r in doc["results"])

    def test_sweep_without_section(self, tmp_path):
        assert main(["sweep", "--config", _write(tmp_path, BUMP)]) == 2

    def test_dumps_sorted(self):
        assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
