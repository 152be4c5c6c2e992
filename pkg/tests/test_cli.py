import json

import pytest

from mahler.cli import main
from mahler.measures import q_measure, r_measure


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_r_jensen(capsys):
    code, out, _ = run(capsys, ["compute", "--family", "r", "--lambda", "6", "--method", "jensen", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "jensen"
    assert abs(payload["value"] - r_measure(6.0).value) < 1e-9
    assert payload["error_estimate"] >= 0


def test_compute_q_torus(capsys):
    code, out, _ = run(capsys, ["compute", "--family", "q", "--lambda", "-6", "--method", "torus", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "torus"
    assert abs(payload["value"] - q_measure(-6.0).value) < 1e-5


def test_compute_degenerate_p_is_zero(capsys):
    code, out, _ = run(capsys, ["compute", "--family", "p", "--lambda", "-4", "--format", "json"])
    assert code == 0
    assert abs(json.loads(out)["value"]) < 1e-9


def test_compute_poly_file(capsys, tmp_path):
    f = tmp_path / "poly.txt"
    f.write_text("1:0,0\n1:1,0\n1:0,1\n")
    code, out, _ = run(capsys, ["compute", "--poly-file", str(f), "--format", "json"])
    assert code == 0
    assert abs(json.loads(out)["value"] - 0.3230659472) < 1e-6


def test_compute_usage_errors(capsys):
    code, _, err = run(capsys, ["compute", "--family", "r"])
    assert code == 2 and "lambda" in err
    code, _, _ = run(capsys, ["compute", "--family", "qk"])
    assert code == 2


def test_verify_main_passes(capsys):
    code, out, err = run(capsys, ["verify", "main", "--lambda", "-6", "-8", "13", "16"])
    assert code == 0
    lines = [json.loads(line) for line in out.strip().split("\n")]
    assert len(lines) == 4
    assert all(obj["passed"] for obj in lines)
    assert "checks passed" in err


def test_verify_rejects_gap_parameter(capsys):
    code, _, err = run(capsys, ["verify", "main", "--lambda", "5"])
    assert code == 2
    assert "stated for" in err


def test_verify_hyp_residuals(capsys):
    code, out, _ = run(capsys, ["verify", "hyp", "--grid", "20"])
    assert code == 0
    for line in out.strip().split("\n"):
        assert abs(json.loads(line)["residual"]) < 1e-12


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, ["verify", "main", "--lambda", "-6", "--tol", "main=1e-20"])
    assert code == 1


def test_verify_out_file_and_determinism(capsys, tmp_path):
    f1 = tmp_path / "a.jsonl"
    f2 = tmp_path / "b.jsonl"
    assert run(capsys, ["verify", "branches", "--out", str(f1)])[0] == 0
    assert run(capsys, ["verify", "branches", "--out", str(f2)])[0] == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_sweep_identity(capsys):
    code, out, _ = run(capsys, ["sweep", "--identity", "main", "--from", "13", "--to", "20", "--step", "0.5"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "lambda,lhs,rhs,residual,error_estimate,status"
    rows = lines[1:]
    assert len(rows) == 15
    for row in rows:
        fields = row.split(",")
        assert fields[-1] == "ok"
        assert abs(float(fields[3])) < 1e-7


def test_sweep_family_monotone(capsys):
    code, out, _ = run(capsys, ["sweep", "--family", "r", "--from", "5", "--to", "10", "--step", "1"])
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert len(rows) == 6
    values = [float(r.split(",")[1]) for r in rows]
    assert values == sorted(values)
    assert all(a < b for a, b in zip(values, values[1:]))


def test_sweep_rows_record_failures(capsys):
    # lam = 12.5 is in the gap: that row reports an error, the others succeed
    code, out, _ = run(capsys, ["sweep", "--identity", "main", "--from", "12.5", "--to", "13.5", "--step", "0.5"])
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert rows[0].split(",")[-1].startswith("error:")
    assert rows[1].split(",")[-1] == "ok"


def test_sweep_empty_range_is_usage_error(capsys):
    code, _, _ = run(capsys, ["sweep", "--family", "r", "--from", "7", "--to", "5", "--step", "1"])
    assert code == 2


def test_sweep_with_no_valid_rows_is_numerical_failure(capsys):
    code, out, _ = run(capsys, ["sweep", "--identity", "main", "--from", "0", "--to", "2", "--step", "1"])
    assert code == 3
    assert all(",error:" in row for row in out.strip().split("\n")[1:])


def test_compute_numerical_failure_exit_code(capsys, tmp_path):
    f = tmp_path / "tiny.txt"
    f.write_text("1e-320:0,0\n")
    code, _, err = run(capsys, ["compute", "--poly-file", str(f)])
    assert code == 3
    assert "numerical failure" in err


def test_sweep_jobs_output_is_identical(capsys):
    _, seq, _ = run(capsys, ["sweep", "--identity", "main", "--from", "13", "--to", "16", "--step", "1"])
    _, par, _ = run(capsys, ["sweep", "--identity", "main", "--from", "13", "--to", "16", "--step", "1", "--jobs", "4"])
    assert seq == par


def test_show_config(capsys):
    code, out, _ = run(capsys, ["--show-config"])
    assert code == 0
    payload = json.loads(out)
    assert payload["defaults"]["tanh_sinh_level_max"] == 12
    assert payload["run"]["node_budget"] >= 64


def test_missing_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_precision_env_var(capsys, monkeypatch):
    monkeypatch.setenv("MAHLER_PRECISION", "extended")
    code, out, _ = run(capsys, ["--show-config"])
    assert code == 0
    assert json.loads(out)["run"]["precision"] == "extended"
