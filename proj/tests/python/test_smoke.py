import json
import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

import ruledgeo

CONFIGS = Path(os.environ.get("RULEDGEO_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def test_parse_and_eval():
    e = ruledgeo.parse("sin(s)^2 + cos(s)^2")
    for s in np.linspace(-3, 3, 7):
        assert e(s) == pytest.approx(1.0, abs=1e-15)
    value, d1, d2, d3 = ruledgeo.parse("exp(2*s)").jet(0.5)
    assert (d1, d2, d3) == pytest.approx((2 * value, 4 * value, 8 * value))
    assert ruledgeo.parse(str(e)) == e
    assert ruledgeo.parse("2*pi").is_constant()


def test_parse_error_offset():
    with pytest.raises(ruledgeo.ParseError, match="offset 5"):
        ruledgeo.parse("cos(s")


def test_domain_error():
    with pytest.raises(ruledgeo.DomainError):
        ruledgeo.parse("log(s)")(-1.0)


def test_helix_frenet():
    f = ruledgeo.frenet("3*cos(s/5)", "3*sin(s/5)", "4*s/5", 1.0)
    assert f["kappa"] == pytest.approx(0.12)
    assert f["tau"] == pytest.approx(0.16)
    assert f["speed"] == pytest.approx(1.0)
    frame = np.stack([f["T"], f["N"], f["B"]])
    assert np.allclose(frame @ frame.T, np.eye(3), atol=1e-14)


def example1():
    return ruledgeo.load_config(str(CONFIGS / "example1.json"))


def test_example1_theorems():
    t = ruledgeo.theorems(example1())
    assert t["geodesic"]
    assert not t["asymptotic"]
    assert t["max_abs_k_g"] < 1e-9


def test_example1_mesh_matches_numpy_oracle():
    cfg = example1()
    mesh = ruledgeo.tessellate(cfg)
    v = mesh["vertices"]
    assert v.shape == (cfg.n_s * cfg.n_v, 3)
    assert mesh["faces"].shape == (2 * (cfg.n_s - 1) * (cfg.n_v - 1), 3)

    # Helix (a cos s, a sin s, b s) with a = 3/5, b = 4/5 has a closed-form Frenet frame.
    a, b = 0.6, 0.8
    s = np.linspace(-5, 5, cfg.n_s)[:, None, None]
    w = np.linspace(-1, 1, cfg.n_v)[None, :, None]
    c, sn, one = np.cos(s), np.sin(s), np.ones_like(s)
    r = np.concatenate([a * c, a * sn, b * s], -1)
    T = np.concatenate([-a * sn, a * c, b * one], -1)
    N = np.concatenate([-c, -sn, 0 * one], -1)
    B = np.concatenate([b * sn, -b * c, a * one], -1)
    th = np.arctan(s)
    U = np.cos(th) * N + np.sin(th) * B
    V = -np.sin(th) * N + np.cos(th) * B
    X = s**2 * T + s**2 * U + s * V
    expected = (r + w * X).reshape(-1, 3)
    assert np.max(np.abs(v - expected)) < 1e-12 * np.max(np.abs(expected))


def test_developable_verdicts():
    yes, _ = ruledgeo.developable(ruledgeo.load_config(str(CONFIGS / "corollary9_developable.json")))
    no, det = ruledgeo.developable(ruledgeo.load_config(str(CONFIGS / "corollary9_nondevelopable.json")))
    assert yes == "yes"
    assert no == "no"
    assert det > 1e-3


def test_config_error():
    with pytest.raises(ruledgeo.ConfigError):
        ruledgeo.parse_config("[]")


def test_run_cli_in_process():
    code, out, err = ruledgeo.run_cli(["verify", "--config", str(CONFIGS / "example1.json")])
    assert code == 0, err
    assert json.loads(out)["verification"]["passed"]
    code, _, err = ruledgeo.run_cli(["verify", "--config", str(CONFIGS / "example1_rmf.json")])
    assert code == 1


@pytest.mark.skipif("RULEDGEO_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_binary_exit_codes(tmp_path):
    cli = os.environ["RULEDGEO_CLI"]
    out = tmp_path / "ex1.obj"
    ok = subprocess.run([cli, "surface", "--config", str(CONFIGS / "example1.json"), "--out", str(out)])
    assert ok.returncode == 0
    assert out.read_text().count("\nv ") + 1 >= 1111
    bad = subprocess.run([cli, "frames"], capture_output=True, text=True)
    assert bad.returncode == 2
