"""Command-line interface: artifacts, determinism, exit codes."""

import json

import pytest

from planargrav.cli import main, EXIT_OK, EXIT_USAGE


def test_enumerate_csv_artifact(tmp_path, capsys):
    out = tmp_path / "counts.csv"
    assert main(["enumerate", "--nmax", "8", "--format", "csv",
                 "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "N,m,count"
    assert "3,3,4" in lines


def test_gf_reports_critical_point(tmp_path):
    out = tmp_path / "gf.json"
    assert main(["gf", "--beta", "1", "--order", "50",
                 "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["x1"] == pytest.approx(0.272166, abs=1e-5)
    assert doc["version"]
    assert len(doc["coefficients"]) == 51


def test_identical_configs_give_identical_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["boundary", "--events", "5000", "--seed", "11", "--out"]
    assert main(args + [str(a)]) == EXIT_OK
    assert main(args + [str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_seed_recorded_in_artifact(tmp_path):
    out = tmp_path / "run.json"
    main(["internal", "--events", "500", "--seed", "42",
          "--out", str(out)])
    assert json.loads(out.read_text())["seed"] == 42


def test_config_file_overrides_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed=9\nevents=1000\n")
    out = tmp_path / "run.json"
    main(["boundary", "--seed", "0", "--config", str(cfg),
          "--out", str(out)])
    doc = json.loads(out.read_text())
    assert doc["seed"] == 9
    assert doc["events"] == 1000


def test_usage_errors_exit_with_code_two():
    assert main(["no-such-command"]) == EXIT_USAGE
    assert main(["gf", "--order", "not-a-number"]) == EXIT_USAGE


def test_no_partial_file_when_rename_fails(tmp_path, monkeypatch):
    out = tmp_path / "x.json"
    import os

    def boom(*a, **k):
        raise OSError("simulated failure")

    monkeypatch.setattr(os, "replace", boom)
    assert main(["gf", "--order", "5", "--out", str(out)]) != EXIT_OK
    assert not out.exists()
    assert not list(tmp_path.glob(".tmp-*"))
