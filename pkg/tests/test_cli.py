import json

import pytest

from llo_qkd.core.const import TABLE1_PARAMS, ExitCode
from llo_qkd.main import main


@pytest.fixture
def table1_file(tmp_path):
    path = tmp_path / "table1.json"
    path.write_text(json.dumps(TABLE1_PARAMS))
    return path


def test_keyrate_report(table1_file, capsys):
    assert main(["keyrate", str(table1_file), "--model", "trusted"]) == ExitCode.OK
    out = capsys.readouterr().out
    assert "Model: trusted" in out
    assert "Mbit/s" in out
    assert "xi_error_t" in out


def test_keyrate_json(table1_file, capsys):
    assert main(["keyrate", str(table1_file), "--model", "trusted", "--json"]) == ExitCode.OK
    document = json.loads(capsys.readouterr().out)

    assert document["model"] == "trusted"
    assert document["key"] == pytest.approx(6.358e6, rel=0.01)
    assert len(document["lambdas"]) == 5
    assert document["budget"]["xi_tot"] == 0.056


def test_keyrate_csv(table1_file, capsys):
    assert main(["keyrate", str(table1_file), "--csv"]) == ExitCode.OK
    header, row = capsys.readouterr().out.strip().split("\n")
    values = dict(zip(header.split(","), row.split(",")))
    assert values["model"] == "conventional"
    assert float(values["key"]) == pytest.approx(4.556e6, rel=0.005)


def test_missing_file(tmp_path, capsys):
    assert main(["keyrate", str(tmp_path / "absent.json")]) == ExitCode.CONFIG
    assert "Error" in capsys.readouterr().err


def test_invalid_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"eta": 1.5}))
    assert main(["keyrate", str(path)]) == ExitCode.CONFIG
    assert "eta" in capsys.readouterr().err


def test_low_measured_noise(tmp_path, capsys):
    path = tmp_path / "low.json"
    path.write_text(json.dumps({**TABLE1_PARAMS, "xi_tot": 0.01}))

    assert main(["keyrate", str(path), "--model", "conventional", "--json"]) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)["k"] == pytest.approx(0.0795, rel=2e-3)
    assert main(["keyrate", str(path), "--model", "trusted"]) == ExitCode.NONPHYSICAL
    assert "exceeds the total excess noise" in capsys.readouterr().err


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--start", "0", "--stop", "100", "--step", "1", "--out", str(out)]) == ExitCode.OK

    raw = out.read_bytes()
    assert b"\r\n" not in raw
    lines = raw.decode().strip().split("\n")
    header = lines[0].split(",")
    assert header[:5] == ["distance_km", "transmittance", "xi_tot", "xi_tot_trusted", "xi_error_t_over_t"]
    assert "k_trusted" in header and "key_conventional" in header
    assert len(lines) == 102
    assert [float(line.split(",")[0]) for line in lines[1:]] == [float(d) for d in range(101)]
    assert "Maximum distance trusted" in capsys.readouterr().out


def test_sweep_step_larger_than_range(tmp_path):
    out = tmp_path / "single.csv"
    assert main(["sweep", "--start", "5", "--stop", "7", "--step", "10", "--out", str(out)]) == ExitCode.OK
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 2
    assert float(lines[1].split(",")[0]) == 5.0


def test_sweep_reversed_range():
    assert main(["sweep", "--start", "10", "--stop", "5"]) == ExitCode.CONFIG


def test_sweep_json(capsys):
    assert main(["sweep", "--stop", "4", "--json", "--models", "trusted"]) == ExitCode.OK
    document = json.loads(capsys.readouterr().out)
    assert len(document["rows"]) == 5
    assert set(document["rows"][0]["columns"]) == {"k_trusted", "key_trusted"}


def test_attack_columns(tmp_path, capsys):
    out = tmp_path / "attack.csv"
    assert main(["attack", "--alpha-low", "0.14", "--out", str(out)]) == ExitCode.OK
    header = out.read_text().split("\n")[0].split(",")
    assert "k_trusted_attacked" in header
    report = capsys.readouterr().out
    assert "Ordering K_conv <= K_attacked <= K_trusted: ok" in report
    assert "Intensity alarm triggered" in report


def test_unmonitored_attack_label(tmp_path):
    out = tmp_path / "diag.csv"
    assert main(["attack", "--monitored", "false", "--out", str(out)]) == ExitCode.OK
    assert "k_insecure-diagnostic" in out.read_text().split("\n")[0]


def test_attack_rejects_faster_fiber():
    assert main(["attack", "--alpha-low", "0.3"]) == ExitCode.CONFIG


def test_mc_validate_needs_samples(capsys):
    assert main(["mc-validate", "--samples", "1000"]) == ExitCode.CONFIG
    assert "samples" in capsys.readouterr().err


def test_mc_validate_is_deterministic(capsys):
    first = main(["mc-validate", "--samples", "10000", "--seed", "7"])
    first_out = capsys.readouterr().out
    second = main(["mc-validate", "--samples", "10000", "--seed", "7"])
    assert second == first
    assert capsys.readouterr().out == first_out
    assert "compensated_protocol" in first_out


@pytest.mark.slow
def test_mc_validate_table1(table1_file, capsys):
    assert main(["mc-validate", str(table1_file), "--samples", "1000000"]) == ExitCode.OK
    assert "FAIL" not in capsys.readouterr().out


def test_reproduce_table1(capsys):
    assert main(["reproduce-table1"]) == ExitCode.OK
    out = capsys.readouterr().out
    assert "key_conventional" in out
    assert "Key^T/Key" in out
    assert "FAIL" not in out


def test_fig5(tmp_path):
    out = tmp_path / "fig5.csv"
    assert main(["fig5", "--stop", "30", "--out", str(out)]) == ExitCode.OK
    assert len(out.read_text().strip().split("\n")) == 32


def test_unknown_command():
    with pytest.raises(SystemExit) as exc_info:
        main(["plot"])
    assert exc_info.value.code == 2


def test_keyrate_fluctuation_bound(table1_file, capsys):
    assert main(["keyrate", str(table1_file), "--model", "trusted", "--json"]) == ExitCode.OK
    nominal = json.loads(capsys.readouterr().out)
    assert main(["keyrate", str(table1_file), "--model", "trusted", "--json", "--fluctuation", "0.1"]) == ExitCode.OK
    bounded = json.loads(capsys.readouterr().out)

    assert bounded["k"] < nominal["k"]
    assert bounded["budget"]["xi_error_t"] == pytest.approx(nominal["budget"]["xi_error_t"] / 1.1, rel=1e-12)


def test_negative_fluctuation_is_a_usage_error():
    with pytest.raises(SystemExit) as exc_info:
        main(["keyrate", "--fluctuation", "-0.1"])
    assert exc_info.value.code == 2


def test_keyrate_max_distance(table1_file, capsys):
    assert main(["keyrate", str(table1_file), "--model", "trusted", "--max-distance"]) == ExitCode.OK
    out = capsys.readouterr().out
    line = next(line for line in out.splitlines() if line.startswith("Maximum distance trusted"))
    assert 41.0 < float(line.split(":")[1].split()[0]) < 42.0
    assert "trusted share" in out


def test_attack_fluctuation(tmp_path, capsys):
    nominal = tmp_path / "nominal.csv"
    bounded = tmp_path / "bounded.csv"
    assert main(["attack", "--stop", "10", "--out", str(nominal)]) == ExitCode.OK
    assert main(["attack", "--stop", "10", "--fluctuation", "0.1", "--out", str(bounded)]) == ExitCode.OK

    def column(path, name):
        lines = path.read_text().strip().split("\n")
        index = lines[0].split(",").index(name)
        return [float(line.split(",")[index]) for line in lines[1:]]

    assert all(b < n for b, n in zip(column(bounded, "k_trusted"), column(nominal, "k_trusted")))
    assert column(bounded, "k_conventional") == column(nominal, "k_conventional")
