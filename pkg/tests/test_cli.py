import json

import pytest

from cliffvcs.cli import build_config, main
from cliffvcs.errors import ConfigError


def run(tmp_path, monkeypatch, *argv, config=None):
    monkeypatch.setenv("CLIFFVCS_OUT_DIR", str(tmp_path))
    args = list(argv)
    if config is not None:
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(config))
        args += ["--config", str(cfg)]
    return main(args)


def report(tmp_path, group, action):
    return (tmp_path / f"report-{group}-{action}.json").read_text()


def test_algebra_check_passes(tmp_path, monkeypatch, capsys):
    assert run(tmp_path, monkeypatch, "algebra", "check", config={"samples": 100}) == 0
    data = json.loads(report(tmp_path, "algebra", "check"))
    assert data["passed"] is True
    assert "PASS" in capsys.readouterr().out


def test_k8_link_exit_one(tmp_path, monkeypatch):
    assert run(tmp_path, monkeypatch, "algebra", "check",
               config={"samples": 20, "link": "minkowski"}) == 1


def test_report_timestamp_on_line_two(tmp_path, monkeypatch):
    run(tmp_path, monkeypatch, "vcs", "normalize")
    lines = report(tmp_path, "vcs", "normalize").splitlines()
    assert lines[0] == "{" and lines[1].strip().startswith('"generated_at"')


def test_deterministic_modulo_timestamp(tmp_path, monkeypatch):
    cfg = {"samples": 200, "seed": 11}
    run(tmp_path, monkeypatch, "algebra", "check", config=cfg)
    first = report(tmp_path, "algebra", "check").splitlines()
    run(tmp_path, monkeypatch, "algebra", "check", config=cfg)
    second = report(tmp_path, "algebra", "check").splitlines()
    assert first[:1] + first[2:] == second[:1] + second[2:]


def test_bad_coeff_length_exit_two(tmp_path, monkeypatch, capsys):
    code = run(tmp_path, monkeypatch, "vcs", "normalize", config={"coeffs": [1, 2, 3]})
    assert code == 2
    assert "coeffs" in capsys.readouterr().err


def test_unknown_key_exit_two(tmp_path, monkeypatch):
    assert run(tmp_path, monkeypatch, "vcs", "expform", config={"colour": 1}) == 2


def test_usage_error_exit_two(tmp_path, monkeypatch):
    assert run(tmp_path, monkeypatch, "vcs", "nonsense") == 2


def test_moments_table_overflow(tmp_path, monkeypatch):
    cfg = {"rho": {"table": [1, 1, 2]}, "m_max": 5}
    assert run(tmp_path, monkeypatch, "moments", "verify", config=cfg) == 2


def test_gaussian_density_fails(tmp_path, monkeypatch):
    assert run(tmp_path, monkeypatch, "moments", "verify", config={"density": "gaussian", "m_max": 5}) == 1


def test_uncertainty_table_line(tmp_path, monkeypatch, capsys):
    assert run(tmp_path, monkeypatch, "vcs", "uncertainty") == 0
    assert "saturated: true" in capsys.readouterr().out


def test_expform_and_fock_flag(tmp_path, monkeypatch):
    assert run(tmp_path, monkeypatch, "vcs", "expform", "--fock", "40",
               config={"coeffs": [0.3, 0.2, 0.1, 0.4]}) == 0
    assert json.loads(report(tmp_path, "vcs", "expform"))["records"][0]["truncation"]["M"] == 40


def test_out_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CLIFFVCS_OUT_DIR", str(tmp_path / "sub"))
    assert main(["vcs", "normalize", "--out", "elsewhere/r.json"]) == 0
    assert (tmp_path / "sub" / "r.json").exists()


def test_build_config_errors_name_field():
    with pytest.raises(ConfigError) as exc:
        build_config({"tolerance": -1})
    assert exc.value.field == "tolerance"
    with pytest.raises(ConfigError) as exc:
        build_config({"algebra": "sedenion"})
    assert exc.value.field == "algebra"
