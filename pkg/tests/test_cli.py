"""End-to-end runs of the command-line front end via main(argv)."""

import json
import math

import pytest

from specjump.cli import main
from specjump.coefficients import FourierSeries, series_to_json

from conftest import SAWTOOTH_SPEC, SIGN_SPEC


@pytest.fixture()
def saw_spec(tmp_path):
    p = tmp_path / "saw.spec"
    p.write_text(SAWTOOTH_SPEC + "\n", encoding="utf-8")
    return str(p)


@pytest.fixture()
def sign_spec(tmp_path):
    p = tmp_path / "sign.spec"
    p.write_text(SIGN_SPEC + "\n", encoding="utf-8")
    return str(p)


@pytest.fixture()
def divergent_json(tmp_path):
    # partial sums at the jump of -(log k + 1)/k grow like log^2 n: a series
    # outside the regulated class the estimators assume
    K = 512
    b = tuple(-(math.log(k) + 1.0) / k for k in range(1, K + 1))
    s = FourierSeries(K, 0.0, (0.0,) * K, b, provenance="synthetic")
    p = tmp_path / "div.json"
    p.write_text(series_to_json(s), encoding="utf-8")
    return str(p)


def run_cli(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------

def test_detect_sawtooth_integrated(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys, "--command", "detect", "--input", saw_spec, "--method", "integrated"
    )
    assert rc == 0
    # the continuity point -pi has a near-zero tail, so the relative
    # truncation bound fires there; the estimates themselves are fine
    for line in err.strip().splitlines():
        assert "truncation remainder bound" in line
    lines = out.strip().splitlines()
    assert lines[0] == "x,n,estimate,true_jump,abs_error"
    assert len(lines) == 11  # 2 candidate points x 5 doubling steps
    assert lines[-1] == (
        "0.0,400,3.139239747295795,3.141592653589793,0.0023529062939982026"
    )


def test_detect_sign_fejer(capsys, sign_spec):
    rc, out, err = run_cli(
        capsys, "--command", "detect", "--input", sign_spec, "--method", "fejer"
    )
    assert rc == 0 and err == ""
    lines = out.strip().splitlines()
    assert lines[1] == "-3.141592653589793,25,-2.08,-2.0,0.08000000000000007"
    assert lines[-1] == "0.0,400,2.0,2.0,0.0"


def test_detect_rejects_conjugate_without_r(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "detect", "--input", saw_spec,
        "--method", "conjugate", "--r", "0",
    )
    assert rc == 1
    assert err.strip() == f"error: {saw_spec}: conjugate tails require r >= 1"


def test_detect_flags_divergent_estimates(capsys, divergent_json):
    rc, out, err = run_cli(
        capsys,
        "--command", "detect", "--input", divergent_json,
        "--method", "fejer", "--points", "0.0",
    )
    assert rc == 0
    assert "warning: estimates at x=0.0 grow with n instead of converging" in err
    assert "may not come from a regulated function" in err


def test_strict_turns_the_divergence_warning_into_exit_2(capsys, divergent_json):
    rc, out, err = run_cli(
        capsys,
        "--command", "detect", "--input", divergent_json,
        "--method", "fejer", "--points", "0.0", "--strict",
    )
    assert rc == 2
    assert "grow with n" in err


def test_detect_rejects_n_schedule_beyond_the_stored_coefficients(capsys, divergent_json):
    rc, out, err = run_cli(
        capsys,
        "--command", "detect", "--input", divergent_json,
        "--points", "0.0", "--n-list", "300,600",
    )
    assert rc == 1
    assert "n-schedule reaches 600 but the series stores only K=512 coefficients" in err


def test_malformed_n_list_is_a_usage_error(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "detect", "--input", saw_spec, "--n-list", "10,abc",
    )
    assert rc == 1


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

def test_table_fejer_row(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "table", "--input", saw_spec,
        "--method", "fejer", "--points", "0.0",
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,method,alpha,estimate,true_jump,abs_error"
    assert "50,fejer,,3.141592653589793,3.141592653589793,0.0" in lines


def test_table_tail_methods_report_the_remainder_bound(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "table", "--input", saw_spec,
        "--method", "integrated", "--r", "1", "--points", "0.0",
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,r,method,estimate,true_jump,abs_error,remainder_bound"
    assert (
        "100,1,integrated_tail,3.189030686560433,3.141592653589793,"
        "0.04743803297064009,3.9269908169872435e-10"
    ) in lines


def test_table_wants_exactly_one_point(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "table", "--input", saw_spec, "--points", "0.0,1.0",
    )
    assert rc == 1
    assert "table reports one location; give exactly one point" in err


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------

def test_coeffs_emits_series_json(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys, "--command", "coeffs", "--input", saw_spec, "--Kcap", "8"
    )
    assert rc == 0
    obj = json.loads(out)
    assert sorted(obj) == ["K", "a", "a0_half", "b", "kind", "provenance"]
    assert obj["K"] == 8
    assert obj["b"][0] == 1.0
    assert obj["provenance"] == "closed_form"


def test_coeffs_default_cutoff(capsys, saw_spec):
    rc, out, err = run_cli(capsys, "--command", "coeffs", "--input", saw_spec)
    assert rc == 0
    assert json.loads(out)["K"] == 1000


# ---------------------------------------------------------------------------
# variation
# ---------------------------------------------------------------------------

def test_variation_report_and_suggested_class(capsys, sign_spec):
    rc, out, err = run_cli(capsys, "--command", "variation", "--input", sign_spec)
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "# suggested_class=BV"
    assert lines[1] == "functional,parameter,grid_density,value"
    assert lines[2] == "lambda_variation,harmonic,8,2.0"
    assert "p_variation,1.0,64,2.0" in lines
    assert "modulus,1,8,2.0" in lines


# ---------------------------------------------------------------------------
# diagnose
# ---------------------------------------------------------------------------

def test_diagnose_v2(capsys, saw_spec):
    rc, out, err = run_cli(capsys, "--command", "diagnose", "--input", saw_spec)
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,u_n"
    assert lines[1] == "10,1.0516133569418573"
    assert lines[2] == "100,1.0045166675833548"


def test_diagnose_parseval(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "diagnose", "--input", saw_spec,
        "--check", "parseval", "--n-list", "2,4",
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,lhs,rhs,abs_diff"
    assert lines[1] == "2,3.701101650408509,3.7011016504085097,8.881784197001252e-16"
    assert lines[2] == "4,2.158975962738297,2.158975962738298,8.881784197001252e-16"


def test_diagnose_partial_sums(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "diagnose", "--input", saw_spec,
        "--check", "sn", "--n-list", "10",
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,s_n,pi_s_n"
    assert lines[1] == "10,1.0,3.141592653589793"


def test_diagnose_sawtooth_bound(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "diagnose", "--input", saw_spec,
        "--check", "sawtooth_bound", "--n-list", "5",
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,sup_n_times_tail"
    assert lines[1] == "5,1.1065647789355764"


# ---------------------------------------------------------------------------
# Output plumbing
# ---------------------------------------------------------------------------

def test_out_file_reruns_are_byte_identical(capsys, saw_spec, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for target in (a, b):
        rc, out, err = run_cli(
            capsys,
            "--command", "detect", "--input", saw_spec, "--out", str(target),
        )
        assert rc == 0 and out == ""
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().startswith(b"x,n,estimate")


def test_json_format_mirrors_the_csv_columns(capsys, saw_spec):
    rc, out, err = run_cli(
        capsys,
        "--command", "detect", "--input", saw_spec, "--format", "json",
    )
    assert rc == 0
    obj = json.loads(out)
    assert sorted(obj) == ["columns", "rows"]
    assert obj["columns"] == ["x", "n", "estimate", "true_jump", "abs_error"]
    assert len(obj["rows"]) == 10


def test_usage_exit_codes(capsys, saw_spec):
    assert run_cli(capsys, "--help")[0] == 0
    assert run_cli(capsys, "--command", "bogus")[0] == 1
    rc, out, err = run_cli(capsys, "--command", "detect")
    assert rc == 1
    assert "error:" in err
