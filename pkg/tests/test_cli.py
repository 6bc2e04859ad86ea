import json
import subprocess
import sys

import pytest

from flipqc.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_OK, main, parse_complex
from flipqc.errors import ConfigError


def _write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def _run(tmp_path, command, cfg, *extra):
    out = tmp_path / "out.txt"
    code = main([command, "--config", _write(tmp_path, cfg), "--out", str(out), *extra])
    return code, (out.read_text() if out.exists() else None)


def test_spectrum_eigenvalues(tmp_path):
    code, text = _run(tmp_path, "spectrum", {"geometry": {"r": 3, "s": 1}})
    assert code == EXIT_OK
    rep = json.loads(text)
    vals = sorted(complex(*e["value"]).imag for e in rep["results"]["checks"][0]["eigenvalues"])
    assert vals == pytest.approx([-2, 0, 2], abs=1e-12)
    assert rep["verdict"] == "pass" and rep["seed"] == 0


def test_meijer_exponential(tmp_path):
    code, text = _run(tmp_path, "meijer", {"params": {"b": [0], "t": 1}})
    assert code == EXIT_OK
    pt = json.loads(text)["results"]["points"][0]
    assert abs(pt["value"][0] - 0.3678794412) < 1e-10


def test_csv_output(tmp_path):
    code, text = _run(tmp_path, "meijer", {"params": {"b": [0], "t": 1}}, "--format", "csv")
    assert code == EXIT_OK
    lines = text.strip().splitlines()
    assert lines[0] == "abs_z,re,im,abs,arg"
    assert abs(float(lines[1].split(",")[1]) - 0.36787944117) < 1e-10


@pytest.mark.parametrize("cfg", ["", "{not json", "[1, 2]", {"geometry": {"r": 3, "s": 1}, "bogus": 1},
                                 {"geometry": {"r": 3, "s": 1, "colour": 2}},
                                 {"geometry": {"r": 3, "s": 1}, "params": {"tolerance": 1}},
                                 {"geometry": {"r": 2, "s": 2}}])
def test_bad_config_exits_2_without_output(tmp_path, cfg):
    code, text = _run(tmp_path, "spectrum", cfg)
    assert code == EXIT_CONFIG and text is None


def test_missing_config(tmp_path):
    assert main(["spectrum", "--out", str(tmp_path / "x")]) == EXIT_CONFIG
    assert main(["spectrum", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG
    assert not (tmp_path / "x").exists()


def test_negative_seed_rejected():
    assert main(["selftest", "--seed", "-1"]) == EXIT_CONFIG


def test_deterministic_reports(tmp_path):
    cfg = {"geometry": {"r": 3, "s": 1, "random_roots": True}, "params": {"class": {"psi": 0}, "z_abs": [0.5, 0.2]}}
    runs = []
    for _ in range(2):
        code, text = _run(tmp_path, "charge", cfg, "--seed", "5")
        rep = json.loads(text)
        rep.pop("wall_clock_s")
        runs.append(json.dumps(rep, sort_keys=True))
    assert runs[0] == runs[1]
    code, text = _run(tmp_path, "charge", cfg, "--seed", "6")
    assert json.loads(text)["config_hash"] != json.loads(runs[0])["config_hash"]


def test_failing_check_exits_1(tmp_path):
    cfg = {"geometry": {"r": 4, "s": 1, "random_roots": True},
           "params": {"class": {"psi": 0}, "lambda_index": 1, "ray_arg": -1.0471975511965976}}
    code, text = _run(tmp_path, "asym", cfg, "--seed", "7")
    assert code == EXIT_CHECK
    assert json.loads(text)["verdict"] == "fail"


def test_fm_command(tmp_path):
    code, text = _run(tmp_path, "fm", {"geometry": {"r": 3, "s": 2, "rho": [0.1, 0.05, -0.17], "sigma": [0.2, 0.3]}})
    assert code == EXIT_OK


def test_parse_complex():
    assert parse_complex([1, -2]) == 1 - 2j
    assert parse_complex(3) == 3
    with pytest.raises(ConfigError):
        parse_complex("1+2j")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "flipqc", "selftest"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0, res.stderr
    assert json.loads(res.stdout)["verdict"] == "pass"
