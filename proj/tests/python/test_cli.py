import json
import os
import subprocess

import pytest

CLI = os.environ.get("INTERWEAVE_CLI", "interweave_cli")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_verify_laguerre(tmp_path):
    r = run("verify", "--suite", "laguerre", "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["command"] == "verify" and rep["passed"]
    assert all({"name", "anchor", "value", "threshold", "margin", "pass"} <= c.keys() for c in rep["checks"])


def test_byte_identical_reruns(tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        assert run("sample", "--seed", "9", "--draws", "20000", "--ks_draws", "2000", "--out", str(d)).returncode == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert outs[0] == outs[1]
    assert "report.json" in outs[0] and "sampler_ks.csv" in outs[0]


def test_timing_flag(tmp_path):
    assert run("hardy", "--Ncap", "200", "--timing", "--out", str(tmp_path)).returncode == 0
    assert "runtime_seconds" in json.loads((tmp_path / "report.json").read_text())


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# hardy grid\nbeta = 1\nsigma = 1\nNcap = 100\nformat = csv\n")
    r = run("hardy", "--config", str(cfg), "--Ncap", "200", "--out", str(tmp_path / "o"))
    assert r.returncode == 0, r.stderr
    text = (tmp_path / "o" / "report.csv").read_text()
    assert text.startswith("name,anchor,relation,value,threshold,margin,pass\n")


def test_configuration_errors(tmp_path):
    r = run("entropy", "--beta", "-1", "--sigma", "0", "--out", str(tmp_path))
    assert r.returncode == 2
    assert "beta" in r.stderr and "sigma" in r.stderr
    assert run("entropy", "--nonsense", "1").returncode == 2
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    r = run("verify", "--config", str(cfg))
    assert r.returncode == 2 and "colour" in r.stderr


def test_failing_check_exit_status(tmp_path):
    # A tolerance below roundoff cannot be met.
    r = run("verify", "--suite", "laguerre", "--tol", "1e-30", "--out", str(tmp_path))
    assert r.returncode == 1
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["failures"]


@pytest.mark.parametrize("family", ["kinetic", "transfer"])
def test_cutoff_outputs(tmp_path, family):
    r = run("cutoff", "--family", family, "--samples", "2000", "--sizes", "1,4,16,64", "--out", str(tmp_path))
    assert r.returncode in (0, 1)
    header = (tmp_path / "cutoff_profile.csv").read_text().splitlines()[0]
    assert header == "n,r,t,tv,se"
