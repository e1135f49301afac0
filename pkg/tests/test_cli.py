"""CLI contract: exit codes, machine-parsable errors, the report bundle,
ephemeral-port serving."""

from __future__ import annotations

import json
import os
import re
import signal
import subprocess
import sys
import time
import urllib.request

import pytest
import yaml

from commentlens.cli import main

from conftest import DEMO_DIR


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = {"db_path": str(tmp_path / "cli.db"),
              "org_name": "Riverbend Documentaries"}
    config_path = tmp_path / "config.yaml"
    config_path.write_text(yaml.safe_dump(config))
    return tmp_path, str(config_path)


def run_cli(config_path, *args):
    return main(["-c", config_path, *args])


def test_ingest_analyze_report_bundle(workdir, capsys):
    tmp_path, config_path = workdir
    assert run_cli(config_path, "ingest", "--fixture", DEMO_DIR) == 0
    out = capsys.readouterr().out
    assert "videos=3" in out and "comments=1500" in out

    assert run_cli(config_path, "analyze", "--seed", "3") == 0
    assert "published snapshot=1" in capsys.readouterr().out

    out_dir = tmp_path / "out"
    assert run_cli(config_path, "report", "--out", str(out_dir)) == 0
    assert (out_dir / "channel.json").exists()
    assert (out_dir / "videos.json").exists()
    assert (out_dir / "manifest.json").exists()
    videos = json.loads((out_dir / "videos.json").read_text())["videos"]
    for video in videos:
        vid = video["video_id"]
        for name in ("stats.json", "themes.json", "suggestions.json",
                     "wordcloud.json", "timeseries_week.json",
                     "comments_page_1.json"):
            assert (out_dir / "videos" / vid / name).exists(), f"{vid}/{name}"
    # bundle payloads equal the API shapes (spot check)
    stats = json.loads((out_dir / "videos" / "vid-flood" / "stats.json").read_text())
    assert stats["stats"]["comment_count"] == 280


def test_analyze_missing_dependency_exit_code(workdir, capsys):
    tmp_path, config_path = workdir
    run_cli(config_path, "ingest", "--fixture", DEMO_DIR)
    capsys.readouterr()
    code = run_cli(config_path, "analyze", "--stages", "topics")
    assert code != 0
    err = capsys.readouterr().err
    assert err.startswith("error code=dependency_missing")
    assert "sentiment" in err


def test_analyze_without_ingest_exit_code(workdir, capsys):
    _, config_path = workdir
    code = run_cli(config_path, "analyze")
    assert code != 0
    assert "error code=ingest_empty" in capsys.readouterr().err


def test_config_validate_ok(workdir, capsys):
    _, config_path = workdir
    assert run_cli(config_path, "config", "validate") == 0
    assert "config ok" in capsys.readouterr().out


def test_config_validate_names_bad_field(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({"alerts": {"alpha": 3.5}}))
    code = main(["-c", str(bad), "config", "validate"])
    assert code != 0
    err = capsys.readouterr().err
    assert "error code=config_invalid" in err
    assert "alerts.alpha" in err


def test_config_unknown_field_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({"alerts": {"alfa": 0.5}}))
    assert main(["-c", str(bad), "config", "validate"]) != 0
    assert "alerts.alfa" in capsys.readouterr().err


def test_ingest_fixture_missing_path(workdir, capsys):
    tmp_path, config_path = workdir
    code = run_cli(config_path, "ingest", "--fixture", str(tmp_path / "nope"))
    assert code != 0
    assert "error code=malformed_bundle" in capsys.readouterr().err


def test_serve_port_zero_prints_bound_port(workdir):
    tmp_path, config_path = workdir
    run_cli(config_path, "ingest", "--fixture", DEMO_DIR)
    run_cli(config_path, "analyze", "--stages", "sentiment,stats")
    proc = subprocess.Popen(
        [sys.executable, "-m", "commentlens", "-c", config_path,
         "serve", "--port", "0"],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True,
        cwd=str(tmp_path))
    try:
        line = proc.stdout.readline()
        match = re.search(r"http://127\.0\.0\.1:(\d+)", line)
        assert match, f"no address line: {line!r}"
        port = int(match.group(1))
        assert port > 0
        deadline = time.time() + 10
        payload = None
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(
                        f"http://127.0.0.1:{port}/api/channel", timeout=2) as resp:
                    payload = json.loads(resp.read())
                break
            except Exception:
                time.sleep(0.2)
        assert payload and payload["stats"]["video_count"] == 3
    finally:
        proc.send_signal(signal.SIGINT)
        try:
            proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            proc.kill()
