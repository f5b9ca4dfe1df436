"""Command-line front end, driven in process through main(argv)."""

import json

import numpy as np
import pytest

from gradcorr.cli import main
from gradcorr.correction import run_test
from gradcorr.models import gradient_statistic, make_model
from gradcorr.simulate import SimulationConfig, run_size_study, write_size_csv
from conftest import MODEL_IDS

SEED = 20260814


def _write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def exp_data(tmp_path):
    # four observations averaging 1.5, so S = 1 at phi0 = 1
    return _write(tmp_path / "exp.txt", "1.0\n1.2\n1.8\n2.0\n")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_test_command_reports_unit_statistic(capsys, exp_data):
    code, out, err = run_cli(capsys, "test", "--model", "exponential",
                             "--data", exp_data, "--theta10", "1",
                             "--format", "json")
    assert code == 0 and err == ""
    payload = json.loads(out)
    assert abs(payload["S"] - 1.0) <= 1e-12
    assert set(payload) >= {"S", "S_star", "p_asymptotic", "p_expanded",
                            "p_corrected", "z_modified"}
    assert payload["n"] == 4
    assert payload["coefficients"]["A2"] == 18.0


def test_test_command_matches_library_composition(capsys, exp_data):
    code, out, _ = run_cli(capsys, "test", "--model", "exponential",
                           "--data", exp_data, "--theta10", "1",
                           "--gamma", "0.1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    m = make_model("exponential")
    data = np.array([1.0, 1.2, 1.8, 2.0])
    stat = gradient_statistic(m, data, [1.0])
    coef = m.specialized_coefficients(m.fit_restricted(data, [1.0]))
    report = run_test(stat.value, coef, 1, stat.n, gamma=0.1)
    assert payload["S"] == report.S
    assert payload["S_star"] == report.S_star
    assert payload["p_asymptotic"] == report.p_asymptotic
    assert payload["p_expanded"] == report.p_expanded
    assert payload["p_corrected"] == report.p_corrected
    assert payload["z_modified"] == report.z_modified


def test_test_command_text_and_csv_formats(capsys, exp_data):
    code, out, _ = run_cli(capsys, "test", "--model", "exponential",
                           "--data", exp_data, "--theta10", "1")
    assert code == 0
    assert "S_star" in out and "A1,A2,A3" in out
    code, out, _ = run_cli(capsys, "test", "--model", "exponential",
                           "--data", exp_data, "--theta10", "1",
                           "--format", "csv")
    assert code == 0
    header, values = out.splitlines()
    assert header == "S,S_star,p_asymptotic,p_expanded,p_corrected,z_modified"
    assert abs(float(values.split(",")[0]) - 1.0) <= 1e-12


def test_test_command_names_offending_line(capsys, tmp_path):
    path = _write(tmp_path / "bad.txt", "1.0\n-3.0\n2.0\n")
    code, out, err = run_cli(capsys, "test", "--model", "exponential",
                             "--data", path, "--theta10", "1")
    assert code == 2
    assert "line 2" in err and "positive" in err


def test_test_command_skips_header_line(capsys, tmp_path):
    path = _write(tmp_path / "h.csv", "value\n1.0\n1.2\n1.8\n2.0\n")
    code, out, _ = run_cli(capsys, "test", "--model", "exponential",
                           "--data", path, "--theta10", "1",
                           "--format", "json")
    assert code == 0
    assert json.loads(out)["n"] == 4


def test_test_command_rejects_bad_inputs(capsys, tmp_path, exp_data):
    code, _, err = run_cli(capsys, "test", "--model", "no-such",
                           "--data", exp_data, "--theta10", "1")
    assert code == 2 and "exponential" in err
    code, _, err = run_cli(capsys, "test", "--model", "exponential",
                           "--data", str(tmp_path / "missing.txt"),
                           "--theta10", "1")
    assert code == 2 and "missing.txt" in err
    code, _, err = run_cli(capsys, "test", "--model", "exponential",
                           "--data", exp_data, "--theta10", "1,2")
    assert code == 2 and "theta10" in err
    code, _, err = run_cli(capsys, "test", "--model", "exponential",
                           "--data", exp_data, "--theta10", "1",
                           "--gamma", "1.5")
    assert code == 2 and "gamma" in err
    path = _write(tmp_path / "junk.txt", "1.0\nabc\n")
    code, _, err = run_cli(capsys, "test", "--model", "exponential",
                           "--data", path, "--theta10", "1")
    assert code == 2 and "line 2" in err


def test_two_sample_ingestion_two_files(capsys, tmp_path):
    p1 = _write(tmp_path / "s1.txt", "1.0\n3.0\n")
    p2 = _write(tmp_path / "s2.txt", "2.0\n2.0\n")
    code, out, _ = run_cli(capsys, "test", "--model", "two-sample-exponential",
                           "--data", p1, "--data2", p2, "--theta10", "1",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 4
    assert abs(payload["S"]) <= 1e-12


def test_two_sample_ingestion_two_column_csv(capsys, tmp_path):
    path = _write(tmp_path / "pairs.csv", "1.0,2.0\n3.0,2.0\n")
    code, out, _ = run_cli(capsys, "test", "--model", "two-sample-exponential",
                           "--data", path, "--theta10", "1",
                           "--format", "json")
    assert code == 0
    assert json.loads(out)["n"] == 4


def test_two_sample_errors_name_file_and_line(capsys, tmp_path):
    p1 = _write(tmp_path / "s1.txt", "1.0\n3.0\n2.0\n")
    p2 = _write(tmp_path / "s2.txt", "2.0\n2.0\n-1.0\n")
    code, _, err = run_cli(capsys, "test", "--model", "two-sample-exponential",
                           "--data", p1, "--data2", p2, "--theta10", "1")
    assert code == 2
    assert "s2.txt, line 3" in err
    p3 = _write(tmp_path / "s3.txt", "2.0\n")
    code, _, err = run_cli(capsys, "test", "--model", "two-sample-exponential",
                           "--data", p1, "--data2", p3, "--theta10", "1")
    assert code == 2 and "equal length" in err


def _parse_coeffs(out):
    values = {}
    for line in out.splitlines():
        line = line.strip()
        if "=" in line and line.split()[0] in ("A1", "A2", "A3", "R0", "R1",
                                               "R2", "R3"):
            key, _, val = line.partition("=")
            values[key.strip()] = float(val)
        if line.startswith("route agreement"):
            values["delta"] = float(line.rpartition("=")[2])
    return values


def test_coeffs_gamma_example(capsys):
    code, out, _ = run_cli(capsys, "coeffs", "--model", "gamma",
                           "--params", "k=2")
    assert code == 0
    got = _parse_coeffs(out)
    assert (got["A1"], got["A2"], got["A3"]) == (6.0, 7.5, 2.5)


def test_coeffs_birnbaum_saunders_example(capsys):
    code, out, _ = run_cli(capsys, "coeffs", "--model", "bs",
                           "--params", "phi=1")
    assert code == 0
    assert abs(_parse_coeffs(out)["A3"] - 15.625) <= 1e-12


@pytest.mark.parametrize("model_id", MODEL_IDS)
def test_coeffs_route_agreement_below_threshold(capsys, model_id):
    for route in ("general", "closed"):
        code, out, _ = run_cli(capsys, "coeffs", "--model", model_id,
                               "--route", route)
        assert code == 0
        got = _parse_coeffs(out)
        assert got["delta"] < 1e-8
        assert abs(got["R0"] + got["R1"] + got["R2"] + got["R3"]) <= 1e-9


def test_coeffs_output_is_thin_wrapper(capsys):
    code, out, _ = run_cli(capsys, "coeffs", "--model", "exponential",
                           "--route", "closed")
    assert code == 0
    got = _parse_coeffs(out)
    coef = make_model("exponential").specialized_coefficients(np.array([1.0]))
    for key in ("A1", "A2", "A3", "R0", "R1", "R2", "R3"):
        assert got[key] == getattr(coef, key)


def test_coeffs_inverse_normal_known_shape(capsys):
    code, out, _ = run_cli(capsys, "coeffs", "--model", "inverse-normal",
                           "--params", "known=shape,shape=2,mu=3")
    assert code == 0
    got = _parse_coeffs(out)
    assert abs(got["A2"] - 67.5) <= 1e-9
    assert abs(got["A3"] - 67.5) <= 1e-9


def test_coeffs_rejects_unknown_constant(capsys):
    code, _, err = run_cli(capsys, "coeffs", "--model", "exponential",
                           "--params", "rate=2")
    assert code == 2 and "constants" in err


def test_simulate_grid_shape_and_determinism(capsys, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--model", "bs", "--n", "5:22", "--reps", "40",
            "--alpha", "0.05", "--seed", "42"]
    code, msg, _ = run_cli(capsys, *args, "--out", str(out1))
    assert code == 0
    assert "wrote 36 rows" in msg
    lines = out1.read_text().splitlines()
    assert lines[0] == "n,alpha,procedure,rejections,replicates,rate,distortion,se"
    assert len(lines) == 1 + 18 * 2
    code, _, _ = run_cli(capsys, *args, "--out", str(out2))
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_simulate_is_thin_wrapper(capsys, tmp_path):
    cli_out = tmp_path / "cli.csv"
    code, _, _ = run_cli(capsys, "simulate", "--model", "exponential",
                         "--n", "6,9", "--reps", "200", "--seed", "7",
                         "--out", str(cli_out))
    assert code == 0
    lib_out = tmp_path / "lib.csv"
    cfg = SimulationConfig(model_id="exponential", theta=(1.0,),
                           theta10=(1.0,), sizes=(6, 9), replicates=200,
                           alphas=(0.05,), seed=7,
                           procedures=("uncorrected", "corrected_statistic"))
    write_size_csv(run_size_study(cfg), lib_out)
    assert cli_out.read_bytes() == lib_out.read_bytes()


def test_simulate_rejects_zero_replicates(capsys, tmp_path):
    code, _, err = run_cli(capsys, "simulate", "--model", "exponential",
                           "--n", "6,9", "--reps", "0", "--seed", "1",
                           "--out", str(tmp_path / "x.csv"))
    assert code == 2 and "replicates" in err


def test_simulate_requires_seed(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--model", "exponential", "--n", "6", "--reps",
              "10", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2
    capsys.readouterr()


def test_simulate_rejects_malformed_grid(capsys, tmp_path):
    code, _, err = run_cli(capsys, "simulate", "--model", "exponential",
                           "--n", "5..22", "--reps", "10", "--seed", "1",
                           "--out", str(tmp_path / "x.csv"))
    assert code == 2 and "--n" in err


def test_cdf_study_writes_grid(capsys, tmp_path):
    out = tmp_path / "cdf.csv"
    code, msg, _ = run_cli(capsys, "cdf-study", "--model", "exponential",
                           "--n", "9", "--reps", "400", "--seed", "3",
                           "--out", str(out))
    assert code == 0
    assert "wrote 512 rows" in msg
    assert "sup |empirical - chisq|" in msg
    lines = out.read_text().splitlines()
    assert lines[0] == "x,f_empirical,f_chisq,f_expanded"
    assert len(lines) == 513


def test_cdf_study_rejects_size_list(capsys, tmp_path):
    code, _, err = run_cli(capsys, "cdf-study", "--model", "exponential",
                           "--n", "9,12", "--reps", "10", "--seed", "3",
                           "--out", str(tmp_path / "x.csv"))
    assert code == 2 and "single" in err
