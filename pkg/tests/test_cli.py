import hashlib

import numpy as np
import pytest

from wolfsim.cli import (
    ConfigError,
    dump_config,
    load_config_file,
    main,
    parse_config_text,
    resolve_config,
)

FUMARATE_KEYS = [
    "--set", "system.J12_Hz=15.9",
    "--set", "system.J13_Hz=3.3",
    "--set", "system.J23_Hz=5.8",
]


def read_rows(path):
    header = None
    rows = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
        else:
            rows.append([float(x) for x in line.split(",")])
    return header, np.array(rows)


def test_parse_config_text():
    values = parse_config_text(
        "# comment\n\nsystem.J12_Hz = 15.9  # inline\nfield.tau_s = auto\n"
    )
    assert values == {"system.J12_Hz": "15.9", "field.tau_s": "auto"}


def test_parse_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="conf.cfg:2"):
        parse_config_text("system.J12_Hz = 1\nbogus line\n", source="conf.cfg")
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text("system.J99_Hz = 1\n")
    with pytest.raises(ConfigError, match="empty value"):
        parse_config_text("system.J12_Hz =\n")


def test_resolve_config_requires_couplings():
    with pytest.raises(ConfigError, match="system.J13_Hz"):
        resolve_config({"system.J12_Hz": "15.9"})


def test_resolve_config_types():
    with pytest.raises(ConfigError, match="expected a number"):
        resolve_config(
            {"system.J12_Hz": "x", "system.J13_Hz": "1", "system.J23_Hz": "1"}
        )
    with pytest.raises(ConfigError, match="steps_per_period"):
        resolve_config(
            {
                "system.J12_Hz": "1", "system.J13_Hz": "2", "system.J23_Hz": "3",
                "run.steps_per_period": "50",
            }
        )
    with pytest.raises(ConfigError, match="unknown engine|engine"):
        resolve_config(
            {
                "system.J12_Hz": "1", "system.J13_Hz": "2", "system.J23_Hz": "3",
                "run.engine": "fortran",
            }
        )


def test_dump_round_trip():
    base = {
        "system.J12_Hz": "15.9",
        "system.J13_Hz": "3.3",
        "system.J23_Hz": "5.8",
        "field.B_bias_uT": "1.75",
        "field.f_wolf_Hz": "77.25",
        "run.grid": "0.1,0.2,0.35",
        "run.workers": "3",
    }
    cfg = resolve_config(base)
    text = dump_config(cfg)
    again = resolve_config(parse_config_text(text))
    assert again == cfg
    assert dump_config(again) == text


def test_bundled_config_loads():
    values = load_config_file("fumarate")
    assert values["system.J12_Hz"] == "15.9"
    with pytest.raises(ConfigError, match="not found"):
        load_config_file("no_such_file.cfg")


def test_info_exit_zero(capsys):
    assert main(["info"] + FUMARATE_KEYS) == 0
    out = capsys.readouterr().out
    assert "omega_ST/2pi = 77.363156 Hz" in out
    assert "tau_pi = 0.655293 s" in out


def test_info_dump_config_round_trip(capsys, tmp_path):
    assert main(["info", "--config", "fumarate", "--dump-config"]) == 0
    text = capsys.readouterr().out
    path = tmp_path / "echo.cfg"
    path.write_text(text)
    assert main(["info", "--config", str(path), "--dump-config"]) == 0
    assert capsys.readouterr().out == text


def test_config_error_exit_two(capsys):
    assert main(["info", "--set", "system.J12_Hz=15.9"]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["info", "--config", "/does/not/exist.cfg"]) == 2
    assert main(["simulate"] + FUMARATE_KEYS + ["--set", "field.tau_s=-1"]) == 2


def test_missing_command_exit_two(capsys):
    assert main(FUMARATE_KEYS) == 2
    assert "no command" in capsys.readouterr().err


def test_unwritable_output_exit_three(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = main(
        ["simulate", "--config", "fumarate",
         "--set", "field.tau_s=0.0",
         "--out", str(tmp_path / "nodir" / "x.csv")]
    )
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_simulate_zero_duration_single_row(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["simulate", "--config", "fumarate",
                 "--set", "field.tau_s=0.0"]) == 0
    header, rows = read_rows(tmp_path / "trajectory.csv")
    assert header[:7] == [
        "parameter", "s_polarization", "s_polarization_normalized",
        "p_S0beta", "p_T0beta", "p_Tm1alpha", "analytic_prediction",
    ]
    assert rows.shape[0] == 1
    assert rows[0][0] == 0.0
    assert rows[0][1] == 0.0  # s_polarization


def test_scan_duration_rerun_byte_identical(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    args = [
        "scan-duration", "--config", "fumarate",
        "--set", "run.grid=0.0,0.05,0.1,0.2",
        "--steps-per-period", "150",
        "--out", "scan.csv",
    ]
    assert main(args) == 0
    digest_a = hashlib.sha256((tmp_path / "scan.csv").read_bytes()).hexdigest()
    assert main(args) == 0
    digest_b = hashlib.sha256((tmp_path / "scan.csv").read_bytes()).hexdigest()
    assert digest_a == digest_b


def test_scan_frequency_writes_metadata(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main([
        "scan-frequency", "--config", "fumarate",
        "--set", "run.grid=74.0,76.0,77.363,78.5,80.0",
        "--set", "field.tau_s=0.3",
        "--steps-per-period", "150",
    ]) == 0
    text = (tmp_path / "scan_frequency.csv").read_text()
    assert "# peak_f_Hz = " in text
    assert "# tau_s = 0.3" in text
    header, rows = read_rows(tmp_path / "scan_frequency.csv")
    assert rows[:, 0].tolist() == [74.0, 76.0, 77.363, 78.5, 80.0]
    # off the resonant closed form: analytic column is nan
    assert np.all(np.isnan(rows[:, 6]))


def test_flag_precedence_over_set(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main([
        "simulate", "--config", "fumarate",
        "--set", "field.tau_s=0.0",
        "--set", "run.out=from_set.csv",
        "--out", "from_flag.csv",
    ]) == 0
    assert (tmp_path / "from_flag.csv").exists()
    assert not (tmp_path / "from_set.csv").exists()


def test_set_precedence_over_file(capsys):
    assert main([
        "info", "--config", "fumarate", "--set", "system.J12_Hz=10.0",
        "--dump-config",
    ]) == 0
    assert "system.J12_Hz = 10.0" in capsys.readouterr().out


def test_csv_header_embeds_config(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["simulate", "--config", "fumarate",
                 "--set", "field.tau_s=0.0"]) == 0
    text = (tmp_path / "trajectory.csv").read_text()
    assert "# command = simulate" in text
    assert "# system.J12_Hz = 15.9" in text
    assert "# engine = " in text
    assert text.endswith("\n")
    assert "\r" not in text
