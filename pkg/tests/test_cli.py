from __future__ import annotations

import json
import math
import os

import numpy as np
import pytest

from circledist import TWO_PI, TorusCoords, spectral_distance_fiber, to_bloch
from circledist.cli import ConfigError, load_config, main
from helpers import spec_with_omega, uniform_state

BASIC = """\
[connection]
theta = [
  {mean = 0.0},
  {mean = -0.31},
]
"""


def write(path, text):
    path.write_text(text)
    return str(path)


def read_record(out_dir, name):
    with open(os.path.join(out_dir, f"{name}.json")) as fh:
        return json.load(fh)


def test_load_config_defaults(tmp_path):
    cfg = load_config(write(tmp_path / "c.toml", BASIC))
    assert cfg.spec.n == 2
    assert cfg.oracle_n == 256 and cfg.oracle_restarts == 8
    assert cfg.k_max == 64 and cfg.opt_grid == 512
    assert cfg.queries == []


def test_config_parse_error_reports_line(tmp_path):
    path = write(tmp_path / "c.toml", "[connection]\ntheta = oops\n")
    with pytest.raises(ConfigError, match="line 2"):
        load_config(path)


def test_config_error_names_bad_harmonic(tmp_path):
    text = """\
[connection]
theta = [
  {mean = 0.0},
  {mean = -0.31, harmonics = [[0, 1.0, 0.0]]},
]
"""
    with pytest.raises(ConfigError, match=r"theta\[1\].harmonics\[0\]"):
        load_config(write(tmp_path / "c.toml", text))


def test_config_error_names_bad_query_kind(tmp_path):
    text = BASIC + '\n[[queries]]\nkind = "nope"\n'
    with pytest.raises(ConfigError, match=r"queries\[0\].kind"):
        load_config(write(tmp_path / "c.toml", text))


def test_missing_config_is_exit_2(tmp_path):
    code = main(["run", "--config", str(tmp_path / "absent.toml"), "--out", str(tmp_path / "o")])
    assert code == 2


def test_distance_run_matches_library(tmp_path):
    text = BASIC + """
[[queries]]
kind = "distance"
name = "pair"
k = 1
phi = [0.9]
"""
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path / "c.toml", text), "--out", str(out)]) == 0
    rec = read_record(str(out), "pair")
    assert rec["ok"] and rec["error"] is None
    closed = spectral_distance_fiber(spec_with_omega(0.31), uniform_state(2), TorusCoords(1, 0.0, (0.9,)))
    # 17 significant digits round-trip doubles exactly
    assert rec["result"]["d_spectral"] == closed.value
    # this pair is not horizontally accessible, so the lift distance is inf
    assert rec["result"]["d_horizontal"] == "inf"


def test_disconnected_distance_serializes_inf(tmp_path):
    # integer omega with a fiber phase offset: both distances are +inf
    text = """\
[connection]
theta = [
  {mean = 0.0},
  {mean = 1.0},
]

[[queries]]
kind = "distance"
name = "far"
k = 0
phi = [1.3]
"""
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path / "c.toml", text), "--out", str(out)]) == 0
    raw = open(os.path.join(str(out), "far.json")).read()
    assert '"inf"' in raw
    rec = json.loads(raw)
    assert rec["result"]["d_spectral"] == "inf"
    assert rec["result"]["d_horizontal"] == "inf"


def test_failed_query_is_recorded_and_exit_1(tmp_path):
    # no closed form off the fiber at n = 3: the record carries the error
    text = """\
[connection]
theta = [
  {mean = 0.0},
  {mean = -0.27},
  {mean = -0.61},
]

[[queries]]
kind = "distance"
name = "bad"
k = 0
tau0 = 1.0
phi = [0.3, 0.4]

[[queries]]
kind = "distance"
name = "good"
k = 1
phi = [0.3, 0.4]
"""
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path / "c.toml", text), "--out", str(out)]) == 1
    bad = read_record(str(out), "bad")
    assert not bad["ok"] and "closed form" in bad["error"]
    assert read_record(str(out), "good")["ok"]


def test_query_filter_runs_single(tmp_path):
    text = BASIC + """
[[queries]]
kind = "distance"
name = "one"
k = 1
phi = [0.9]

[[queries]]
kind = "distance"
name = "two"
k = 2
phi = [0.4]
"""
    out = tmp_path / "out"
    code = main(["run", "--config", write(tmp_path / "c.toml", text),
                 "--out", str(out), "--query", "two"])
    assert code == 0
    assert sorted(os.listdir(out)) == ["two.json"]


def test_unknown_query_filter_is_exit_2(tmp_path):
    text = BASIC + """
[[queries]]
kind = "distance"
name = "one"
k = 1
phi = [0.9]
"""
    code = main(["run", "--config", write(tmp_path / "c.toml", text),
                 "--out", str(tmp_path / "o"), "--query", "zzz"])
    assert code == 2


def fiber_profile_config(tmp_path):
    text = BASIC + """
[[queries]]
kind = "profile-fiber"
name = "prof"
k_values = [0, 1]
phi_count = 8
"""
    return write(tmp_path / "c.toml", text)


def test_profile_fiber_csv_and_png(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", fiber_profile_config(tmp_path), "--out", str(out)]) == 0
    lines = open(os.path.join(str(out), "prof.csv")).read().splitlines()
    assert lines[0] == "k,phi,d_spectral,d_horizontal,d_chord"
    assert len(lines) == 1 + 2 * 8
    xi = uniform_state(2)
    R = to_bloch(xi).R
    spec = spec_with_omega(0.31)
    for line in lines[1:]:
        k_s, phi_s, ds_s, dh_s, dc_s = line.split(",")
        k, phi = int(k_s), float(phi_s)
        ds, dh, dc = float(ds_s), float(dh_s), float(dc_s)
        assert ds == spectral_distance_fiber(spec, xi, TorusCoords(k, 0.0, (phi,))).value
        assert dh >= ds - 1e-12
        assert dc == pytest.approx(2 * R * abs(math.sin(0.5 * (2 * k * 0.31 * math.pi + phi))), abs=1e-12)
    png = open(os.path.join(str(out), "prof.png"), "rb").read()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    rec = read_record(str(out), "prof")
    assert rec["result"]["rows"] == 16


def test_profile_torus_header(tmp_path):
    text = BASIC + """
[[queries]]
kind = "profile-torus"
name = "tor"
k = 1
phi = [0.9]
tau0_count = 6
"""
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path / "c.toml", text), "--out", str(out)]) == 0
    lines = open(os.path.join(str(out), "tor.csv")).read().splitlines()
    assert lines[0] == "k,tau0,phi,d_spectral,d_horizontal"
    assert len(lines) == 7


def test_rerun_is_byte_identical(tmp_path):
    cfg = fiber_profile_config(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["run", "--config", cfg, "--out", str(out2)]) == 0
    names = sorted(os.listdir(out1))
    assert names == sorted(os.listdir(out2))
    for name in names:
        a = open(os.path.join(str(out1), name), "rb").read()
        b = open(os.path.join(str(out2), name), "rb").read()
        assert a == b, name


def test_workers_do_not_change_output(tmp_path):
    text = BASIC + """
[[queries]]
kind = "distance"
name = "one"
k = 1
phi = [0.9]

[[queries]]
kind = "distance"
name = "two"
k = 2
phi = [0.4]

[[queries]]
kind = "classify"
name = "three"
zeta_state = [0.6, 0.8]
"""
    cfg = write(tmp_path / "c.toml", text)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["run", "--config", cfg, "--out", str(out2), "--workers", "3"]) == 0
    for name in sorted(os.listdir(out1)):
        a = open(os.path.join(str(out1), name), "rb").read()
        b = open(os.path.join(str(out2), name), "rb").read()
        assert a == b, name


def test_classify_subcommand(tmp_path):
    out = tmp_path / "out"
    code = main(["classify", "--config", write(tmp_path / "c.toml", BASIC),
                 "--out", str(out), "--zeta-state", "0.6,0.8"])
    assert code == 0
    rec = read_record(str(out), "classify")
    assert rec["result"]["tag"] == "DifferentTorus"


def test_oracle_subcommand_smoke(tmp_path):
    out = tmp_path / "out"
    code = main(["oracle", "--config", write(tmp_path / "c.toml", BASIC),
                 "--out", str(out), "--k", "1", "--phi", "0.9",
                 "--n-grid", "64", "--restarts", "1", "--iters", "20", "--seed", "5"])
    assert code == 0
    rec = read_record(str(out), "oracle")
    assert rec["ok"]
    assert rec["result"]["best_value"] > 0
    assert rec["result"]["n_grid"] == 64


def test_oracle_query_reports_divergence(tmp_path):
    text = """\
[connection]
theta = [
  {mean = 0.0},
  {mean = 1.0},
]

[[queries]]
kind = "oracle"
name = "orc"
k = 0
phi = [1.3]
"""
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path / "c.toml", text), "--out", str(out)]) == 0
    rec = read_record(str(out), "orc")
    assert rec["ok"] and rec["result"] == {"divergent": True}
