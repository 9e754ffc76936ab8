"""CLI: exit-code contract, JSON shapes, CSV headers.

0 = verified, 1 = gap over tolerance, 2 = usage/domain error,
3 = mathematical "no" verdict.
"""

import json
import math

import pytest

from fracspec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zeta_basic(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "2+0i")
    assert code == 0
    d = json.loads(out)
    assert abs(d["zeta"][0] - math.pi**2 / 6) < 1e-10
    assert d["zeta"][1] == 0.0
    assert d["gamma"] is not None and d["xi"] is not None


def test_zeta_pole_exit_code(capsys):
    code, _, err = run(capsys, "zeta", "--s", "1+0i")
    assert code == 2
    assert "pole" in err


def test_zeta_near_zero_modulus(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "0.5+14.134725i")
    assert code == 0
    assert json.loads(out)["abs_zeta"] < 1e-5


def test_zeta_gamma_pole_is_null(capsys):
    # negative real part needs the --s=value spelling (argparse dashes)
    code, out, _ = run(capsys, "zeta", "--s=-2+0i")
    assert code == 0
    d = json.loads(out)
    assert d["gamma"] is None and abs(d["zeta"][0]) < 1e-9


def test_zeta_parse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["zeta", "--s", "fish"])
    assert exc.value.code == 2


def test_zeros_range(capsys):
    code, out, _ = run(capsys, "zeros", "--t-max", "30")
    assert code == 0
    brackets = json.loads(out)
    assert len(brackets) == 3
    assert abs(brackets[0]["refined_t"] - 14.134725) < 1e-6


def test_zeros_empty_ok(capsys):
    code, out, _ = run(capsys, "zeros", "--t-min", "0", "--t-max", "10")
    assert code == 0
    assert json.loads(out) == []


def test_zeros_invalid_range(capsys):
    code, _, err = run(capsys, "zeros", "--t-max", "-1")
    assert code == 2 and err


def test_string_zeta_closed_form(capsys):
    code, out, _ = run(capsys, "string", "--builtin", "cantor", "--depth", "30", "zeta", "--s", "2+0i")
    assert code == 0
    d = json.loads(out)
    assert abs(d["series"][0] - 1.0 / 7.0) < 1e-9
    assert abs(d["closed_form"][0] - 1.0 / 7.0) < 1e-12


def test_string_dims_count(capsys):
    code, out, _ = run(capsys, "string", "--builtin", "cantor", "dims", "--im-window", "12")
    assert code == 0
    assert len(json.loads(out)["dimensions"]) == 5


def test_string_tube_verification_exit(capsys):
    code, out, _ = run(
        capsys, "string", "--builtin", "cantor", "--depth", "40",
        "tube", "--epsilon", "0.0555555", "--n-terms", "200", "--compare-direct",
    )
    assert code == 0
    assert json.loads(out)["gap"] < 1e-3
    code, _, _ = run(
        capsys, "string", "--builtin", "cantor", "--depth", "40",
        "tube", "--epsilon", "0.0555555", "--n-terms", "200", "--compare-direct",
        "--tolerance", "1e-9",
    )
    assert code == 1  # same gap, unreasonable tolerance: verification fails


def test_string_spec_file(tmp_path, capsys):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"type": "explicit", "atoms": [[2.0, 1.0], [4.0, 1.0]]}))
    code, out, _ = run(capsys, "string", "--spec-file", str(spec), "count", "--x", "3")
    assert code == 0
    assert json.loads(out)["count"] == 1.0


def test_string_dims_need_lattice(capsys):
    code, _, err = run(capsys, "string", "--builtin", "unit", "dims", "--im-window", "5")
    assert code == 2 and err


def test_spectral_count(capsys):
    code, out, _ = run(capsys, "spectral", "--builtin", "cantor", "--depth", "3", "count", "--x", "6.5")
    assert code == 0
    assert json.loads(out)["spectral_count"] == 2.0


def test_spectral_zeta_check_verified(capsys):
    code, out, _ = run(
        capsys, "spectral", "--builtin", "cantor", "--depth", "20",
        "zeta-check", "--s", "3+0i", "--cutoff", "1e5",
    )
    assert code == 0
    d = json.loads(out)
    assert d["gap"] <= d["bound"]


def test_spectral_explicit_json(capsys):
    code, out, _ = run(
        capsys, "spectral", "--builtin", "cantor", "explicit", "--x", "20", "--n-terms", "300"
    )
    assert code == 0
    d = json.loads(out)
    assert {"x", "pole_sum", "direct_value", "formula_value", "gap"} <= set(d)
    assert d["gap"] < 0.02


def test_op_verdict_no_is_exit_3(capsys):
    code, out, _ = run(capsys, "op", "verdict", "--c", "0.5", "--T-max", "20")
    assert code == 3
    d = json.loads(out)
    assert d["verdict"] == "no" and d["zero_found"]


def test_op_verdict_yes_is_exit_0(capsys):
    code, out, _ = run(capsys, "op", "verdict", "--c", "2", "--T-max", "10")
    assert code == 0
    assert json.loads(out)["verdict"] == "yes"


def test_op_verdict_pole_line(capsys):
    code, _, err = run(capsys, "op", "verdict", "--c", "1", "--T-max", "10")
    assert code == 2 and "PoleLine" in err


def test_op_spectrum_csv(tmp_path, capsys):
    out_path = tmp_path / "curve.csv"
    code, _, _ = run(
        capsys, "op", "spectrum", "--c", "2", "--T", "2", "--step", "0.5",
        "--format", "csv", "--output", str(out_path),
    )
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "# fracspec-csv v1"
    assert lines[1].startswith("# min_mod=")
    assert lines[2] == "tau,re_zeta,im_zeta,abs_zeta"
    assert len(lines) == 3 + 5  # tau = 0, 0.5, ..., 2


def test_op_scan_json(capsys):
    code, out, _ = run(capsys, "op", "scan", "--c-grid", "0.9,2", "--T", "10")
    assert code == 0
    reports = json.loads(out)
    assert [r["c"] for r in reports] == [0.9, 2.0]
    assert reports[1]["verdict"] == "yes"
    assert "sup_2T" in reports[0]["notes"]


def test_op_invert_roundtrip(capsys):
    code, out, _ = run(capsys, "op", "invert", "--t-max", "3.0", "--step", "0.01")
    assert code == 0
    assert json.loads(out)["max_abs_error"] == 0.0


def test_op_apply_csv_header(capsys):
    code, out, _ = run(
        capsys, "op", "apply", "--t-max", "2.0", "--step", "0.1", "--format", "csv"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# fracspec-csv v1"
    assert lines[1] == "t,input,output"


def test_json_output_roundtrips_to_file(tmp_path, capsys):
    out_path = tmp_path / "z.json"
    code, _, _ = run(capsys, "zeta", "--s", "2+0i", "--output", str(out_path))
    assert code == 0
    assert json.loads(out_path.read_text())["zeta"][0] == pytest.approx(math.pi**2 / 6)
