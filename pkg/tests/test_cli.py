import re

import numpy as np
import pytest

from vcloner import cli

FLOAT = re.compile(r"-?\d\.\d{11}e[+-]\d{2,3}$")


def run(args):
    return cli.main(args)


def test_usage_error_exits_one():
    with pytest.raises(SystemExit) as err:
        run(["fidelity", "--no-such-flag"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        run(["photons", "--method", "rk4"])  # rejected by the parser itself
    assert err.value.code == 1
    with pytest.raises(SystemExit):
        run([])


def test_bad_configuration_returns_one(capsys):
    assert run(["fidelity", "--bias", "sideways"]) == 1
    assert "bias" in capsys.readouterr().err
    assert run(["fidelity", "--atoms", "0"]) == 1
    assert run(["fidelity", "--alpha-re", "0.9"]) == 1  # not normalized
    assert run(["avg-fidelity", "--bias", "none"]) == 1
    assert run(["fidelity", "--bloch-grid", "16"]) == 1


def test_fidelity_to_stdout(capsys):
    code = run(["fidelity", "--tau-max", "1", "--tau-points", "5"])
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "tau,fidelity"
    assert len(lines) == 6
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(1.0)
    assert FLOAT.match(first[1])


def test_biased_fidelity_adds_reference_column(tmp_path):
    out = tmp_path / "f.csv"
    code = run(["fidelity", "--bias", "matched:3", "--tau-max", "2",
                "--tau-points", "9", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "tau,fidelity,fidelity_nobias"
    data = np.loadtxt(str(out), delimiter=",", skiprows=1)
    assert data.shape == (9, 3)
    # biased curve should not dip below the unbiased one here
    assert np.all(data[:, 1] >= data[:, 2] - 1e-9)


def test_photons_columns(capsys):
    code = run(["photons", "--bias", "matched:3", "--tau-max", "1",
                "--tau-points", "4"])
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "tau,n_right,n_all"
    assert len(lines) == 5


def test_photons_average_runs_the_sphere(capsys):
    code = run(["photons", "--average", "--bias", "lab:0,8", "--tau-max", "1",
                "--tau-points", "3", "--bloch-grid", "4,4"])
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "tau,n_right,n_all"
    assert len(lines) == 4


def test_avg_fidelity_matched_reduces_to_universal_curve(tmp_path):
    out = tmp_path / "avg.csv"
    code = run(["avg-fidelity", "--bias", "matched:3", "--tau-max", "2",
                "--tau-points", "9", "--bloch-grid", "4,4", "--out", str(out)])
    assert code == 0
    data = np.loadtxt(str(out), delimiter=",", skiprows=1)
    taus = data[:, 0]
    assert np.max(np.abs(data[:, 2] - (0.75 + 0.25 * np.cos(np.sqrt(2) * taus)))) < 1e-9


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# small smoke run\n"
        "tau-points = 11\n"
        "tau_max = 1.5\n"
        "bias = matched:3\n"
    )
    code = run(["fidelity", "--config", str(cfg), "--tau-points", "5"])
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 6  # flag wins over the file
    assert float(lines[-1].split(",")[0]) == pytest.approx(1.5)


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("supersampling = 9\n")
    assert run(["fidelity", "--config", str(cfg)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_missing_config_file_returns_one(tmp_path):
    assert run(["fidelity", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_preset_runs_and_is_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(["preset", "fig3b", "--out", str(a)]) == 0
    assert run(["preset", "fig3b", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().strip().split("\n")
    assert lines[0] == "tau,n_right,n_all"
    assert len(lines) == 1202


def test_preset_names_are_validated():
    with pytest.raises(SystemExit) as err:
        run(["preset", "fig99"])
    assert err.value.code == 1


def test_verify_passes(capsys):
    assert run(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.count("PASS") >= 9


def test_verify_exit_code_on_failure(monkeypatch, capsys):
    monkeypatch.setattr(cli, "_verify_checks",
                        lambda: [("doomed", False, "synthetic")])
    assert run(["verify"]) == 2
    assert "FAIL" in capsys.readouterr().out
