import csv
import io
import json

import pytest

from stablefi.cli import ConfigError, build_config, main


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def test_analyze_all_holds(tmp_path, capsys):
    assert run(tmp_path, "analyze", "--alpha", "1.5", "--gamma", "2") == 0
    doc = json.loads((tmp_path / "analyze.json").read_text())
    assert doc["schema"] == "stablefi-report/1"
    verdicts = {k: v["verdict"] for k, v in doc["reports"][0]["criteria"].items()}
    assert set(verdicts.values()) == {"HOLDS"}


def test_analyze_three_row_csv(tmp_path):
    assert run(tmp_path, "analyze", "--gamma", "0.9,1.0,1.1", "--criteria", "poincare") == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "analyze.csv").read_text())))
    assert [r["verdict"] for r in rows] == ["FAILS", "HOLDS", "HOLDS"]
    assert [float(r["gamma"]) for r in rows] == [0.9, 1.0, 1.1]


def test_analyze_workers_keep_order(tmp_path):
    assert run(tmp_path, "analyze", "--gamma", "2,0.9,1.5,1.0", "--workers", "2",
               "--criteria", "poincare,logsobolev") == 0
    doc = json.loads((tmp_path / "analyze.json").read_text())
    assert [r["gamma"] for r in doc["reports"]] == [2.0, 0.9, 1.5, 1.0]


def test_json_round_trip(tmp_path):
    from stablefi import ClassifyOptions, Weight, classify
    assert run(tmp_path, "analyze", "--family", "log", "--gamma", "0.5") == 0
    doc = json.loads((tmp_path / "analyze.json").read_text())
    rep = classify(1.5, Weight.log(1.5, 0.5), ClassifyOptions())
    assert {k: v["verdict"] for k, v in doc["reports"][0]["criteria"].items()} == {
        k: v.value for k, v in rep.verdicts.items()}


def test_config_file_and_flag_override(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[common]\nalpha = 1.8\nseed = 7\n[analyze]\ngamma = 1.0, 2.0\n"
                   "criteria = poincare\n")
    cfg = build_config("analyze", {"alpha": 1.2}, str(ini))
    assert cfg.alpha == 1.2 and cfg.seed == 7 and cfg.gammas == [1.0, 2.0]
    assert run(tmp_path, "analyze", "--config", str(ini)) == 0


@pytest.mark.parametrize("argv,field", [
    (["analyze", "--alpha", "2.5"], "alpha"),
    (["analyze", "--eps", "1.5"], "eps"),
    (["analyze", "--xi", "1.5"], "xi"),
    (["analyze", "--phi", "cosh"], "phi"),
    (["simulate", "--dt", "0.5"], "dt"),
    (["simulate", "--interval=-1,1"], "interval"),
])
def test_config_errors(tmp_path, capsys, argv, field):
    assert run(tmp_path, *argv) == 2
    assert f"config error: {field}" in capsys.readouterr().err


def test_unknown_config_key(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text("[common]\nalhpa = 1.5\n")
    assert run(tmp_path, "analyze", "--config", str(ini)) == 2
    with pytest.raises(ConfigError):
        build_config("analyze", {}, str(ini))


def test_strict_inconclusive(tmp_path, monkeypatch):
    from stablefi import cli, criteria

    real = cli._analyze_one

    def fake(args):
        rep = real(args)
        rep.verdicts["poincare"] = criteria.Outcome.INCONCLUSIVE
        return rep

    monkeypatch.setattr(cli, "_analyze_one", fake)
    assert run(tmp_path, "analyze", "--gamma", "2") == 0
    assert run(tmp_path, "analyze", "--gamma", "2", "--strict") == 1


def test_orlicz_command(tmp_path):
    assert run(tmp_path, "orlicz", "--gamma", "2,1") == 0
    doc = json.loads((tmp_path / "orlicz.json").read_text())
    assert len(doc["results"]) == 2


def test_green_command_quick(tmp_path):
    # the far-field limit check fails, so the command reports failure
    assert run(tmp_path, "green", "--quick") == 1
    doc = json.loads((tmp_path / "green.json").read_text())
    failed = [k for k, c in doc["report"]["checks"].items() if not c["passed"]]
    assert failed == ["limit"]


def test_simulate_command(tmp_path):
    assert run(tmp_path, "simulate", "--steps", "2000", "--paths", "8", "--no-csv") == 0
    doc = json.loads((tmp_path / "simulate.json").read_text())
    assert doc["seed"] == 0 and doc["tails"]["n_paths"] == 8
    assert not (tmp_path / "simulate.csv").exists()
