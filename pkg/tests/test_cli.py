"""End-to-end CLI behavior: envelopes, formats, exit codes, determinism."""

import csv
import io
import json
import math
import re
import subprocess
import sys

import pytest

from ellzeta import WedgePair, z_k
from ellzeta.cli import main

ENVELOPE_KEYS = ["request", "value", "err_bound", "residual", "pass",
                 "terms_used", "precision", "wall_time_ms"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_eval_zk_envelope_shape_and_value(capsys):
    code, out = run_cli(capsys, "eval", "zk", "--k", "2", "--tau", "0,2", "--sigma", "0,1")
    assert code == 0
    (env,) = json_lines(out)
    assert list(env.keys()) == ENVELOPE_KEYS
    assert env["request"]["subcommand"] == "eval"
    assert env["request"]["target"] == "zk"
    assert abs(env["value"]["re"] - (-0.0740000638550983)) < 1e-12
    assert env["residual"] is None and env["pass"] is None
    assert env["terms_used"] > 0
    assert env["precision"]["epsilon"] == pytest.approx(1e-12)


def test_eval_envelope_matches_library(capsys):
    code, out = run_cli(capsys, "eval", "zk", "--k", "5", "--tau", "0.2,1.0", "--sigma", "0.1,0.8")
    assert code == 0
    (env,) = json_lines(out)
    ref = z_k(5, WedgePair(0.2 + 1.0j, 0.1 + 0.8j))
    assert abs(complex(env["value"]["re"], env["value"]["im"]) - ref.value) < 1e-14
    assert env["err_bound"] == pytest.approx(ref.err_bound)


def test_eval_accepts_a_plus_bi_literals(capsys):
    code1, out1 = run_cli(capsys, "eval", "theta0", "--z", "0.3+0.2i", "--tau", "0.2+1i")
    code2, out2 = run_cli(capsys, "eval", "theta0", "--z", "0.3,0.2", "--tau", "0.2,1")
    assert code1 == code2 == 0
    (e1,), (e2,) = json_lines(out1), json_lines(out2)
    assert e1["value"] == e2["value"]


def test_verify_pass_and_fail_exits(capsys):
    code, out = run_cli(capsys, "verify", "three-term-mod", "--k", "3")
    assert code == 0
    (env,) = json_lines(out)
    assert env["pass"] is True and env["residual"] < 1e-8

    code, out = run_cli(capsys, "verify", "three-term-mod", "--k", "3", "--no-anomaly")
    assert code == 1
    (env,) = json_lines(out)
    assert env["pass"] is False and env["residual"] > 1e-3
    assert env["request"]["params"]["no_anomaly"] == "true"


def test_verify_func_eq_spec_point(capsys):
    code, out = run_cli(capsys, "verify", "func-eq", "--z", "0.3,0.2",
                        "--tau", "0.2,1.0", "--sigma", "0.1,0.8")
    assert code == 0
    (env,) = json_lines(out)
    assert env["pass"] is True


@pytest.mark.parametrize("target", ["three-term-add", "prop1", "logEG",
                                    "thm2-first", "thm2-Q", "lipschitz", "cocycle"])
def test_verify_targets_all_pass_at_defaults(capsys, target):
    code, out = run_cli(capsys, "verify", target)
    assert code == 0
    (env,) = json_lines(out)
    assert env["pass"] is True


def test_limits_zeta_rows_decreasing(capsys):
    code, out = run_cli(capsys, "limits", "zeta-limit", "--k", "2",
                        "--sigmas", "0.05,0.02,0.01")
    assert code == 0
    envs = json_lines(out)
    assert len(envs) == 3
    errs = [e["residual"] for e in envs]
    assert errs[0] > errs[1] > errs[2]
    assert envs[0]["request"]["params"]["sigma"] == "0,0.050000000000000003"


def test_limits_gamma_default_sigmas(capsys):
    code, out = run_cli(capsys, "limits", "gamma-limit")
    assert code == 0
    envs = json_lines(out)
    assert len(envs) == 3
    assert envs[-1]["residual"] < 5e-2


def test_limits_scl_value_approaches_target(capsys):
    code, out = run_cli(capsys, "limits", "scl-limit", "--z", "2")
    assert code == 0
    envs = json_lines(out)
    assert abs(envs[-1]["value"]["re"] - 1.0) < 1e-9
    assert envs[-1]["residual"] < 1e-9


def test_table_divisors_row(capsys):
    code, out = run_cli(capsys, "table", "divisors", "--kmax", "4", "--nmax", "6")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    row6 = rows[5]
    assert row6["n"] == "6"
    assert row6["sigma_1"] == "12"


def test_table_dk_coeffs_leading(capsys):
    code, out = run_cli(capsys, "table", "dk-coeffs", "--k", "2", "--nmax", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert float(rows[0]["coeff_re"]) == pytest.approx(-4 * math.pi ** 2, rel=1e-12)
    assert float(rows[0]["coeff_im"]) == 0.0


def test_table_zk_grid_shape(capsys):
    code, out = run_cli(capsys, "table", "zk-grid", "--k", "5", "--grid", "3x3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    for row in rows:
        assert float(row["err_bound"]) > 0


def test_exit_code_domain(capsys):
    code, out = run_cli(capsys, "eval", "zk", "--tau", "0,-2")
    assert code == 2
    err = json.loads(out)
    assert err["error"]["type"] == "domain"


def test_exit_code_pole(capsys):
    code, out = run_cli(capsys, "eval", "ellgamma", "--z", "0,0")
    assert code == 3
    assert json.loads(out)["error"]["type"] == "pole"


def test_exit_code_truncation(capsys):
    code, out = run_cli(capsys, "eval", "dk", "--q", "0.98,0", "--max-terms", "50")
    assert code == 4
    assert json.loads(out)["error"]["type"] == "truncation"


def test_exit_code_io(capsys):
    code, out = run_cli(capsys, "eval", "zeta", "--k", "2",
                        "--out", "/no_such_dir_ezv/x.json")
    assert code == 5
    assert json.loads(out)["error"]["type"] == "io"


def test_usage_errors_exit_two(capsys):
    assert main(["eval", "zk", "--tau", "0;2"]) == 2
    capsys.readouterr()
    assert main(["eval", "nonsense"]) == 2
    capsys.readouterr()
    assert main(["limits", "zeta-limit", "--sigmas", "a,b"]) == 2
    capsys.readouterr()


def test_verify_cocycle_word_mismatch_is_domain_error(capsys):
    code, out = run_cli(capsys, "verify", "cocycle", "--word", "e12", "--word2", "e13")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "domain"


def test_determinism_modulo_wall_time(capsys):
    _, out1 = run_cli(capsys, "eval", "zk", "--k", "4", "--tau", "0.2,1.0", "--sigma", "0.1,0.8")
    _, out2 = run_cli(capsys, "eval", "zk", "--k", "4", "--tau", "0.2,1.0", "--sigma", "0.1,0.8")
    strip = lambda s: re.sub(r'"wall_time_ms":[^}]*', '', s)
    assert strip(out1) == strip(out2)
    assert out1.count("e") > 0  # sanity: non-empty payload


def test_float_rendering_uses_17_significant_digits(capsys):
    _, out = run_cli(capsys, "eval", "zeta", "--k", "2")
    assert '"epsilon":9.9999999999999998e-13' in out


def test_epsilon_flag_and_env_override(capsys, monkeypatch):
    monkeypatch.setenv("EZV_PRECISION", "1e-6")
    _, out = run_cli(capsys, "eval", "zeta", "--k", "3")
    (env,) = json_lines(out)
    assert env["precision"]["epsilon"] == pytest.approx(1e-6)
    _, out = run_cli(capsys, "eval", "zeta", "--k", "3", "--epsilon", "1e-9")
    (env,) = json_lines(out)
    assert env["precision"]["epsilon"] == pytest.approx(1e-9)
    monkeypatch.setenv("EZV_PRECISION", "junk")
    code, out = run_cli(capsys, "eval", "zeta", "--k", "3")
    assert code == 2


def test_out_file_written(capsys, tmp_path):
    path = tmp_path / "result.json"
    code, out = run_cli(capsys, "eval", "zeta", "--k", "2", "--out", str(path))
    assert code == 0
    assert out == ""
    env = json.loads(path.read_text())
    assert env["value"]["re"] == pytest.approx(math.pi ** 2 / 6, rel=1e-10)


def test_csv_envelope_format(capsys):
    code, out = run_cli(capsys, "eval", "zeta", "--k", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["target"] == "zeta"
    assert rows[0]["pass"] == ""
    assert float(rows[0]["value_re"]) == pytest.approx(math.pi ** 2 / 6, rel=1e-10)


def test_console_script_is_installed():
    proc = subprocess.run([sys.executable, "-m", "ellzeta.cli", "eval", "zeta", "--k", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"request"' in proc.stdout


def test_radius_flag_reaches_policy(capsys):
    _, out = run_cli(capsys, "eval", "zk_lattice", "--k", "5", "--radius", "40")
    (env,) = json_lines(out)
    assert env["precision"]["lattice_radius"] == 40
