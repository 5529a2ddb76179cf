import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qsodyn.cli import main
from qsodyn.core import SimplexPoint
from qsodyn.dynamics import ConjugacyData, OrbitReport, TwoCycle, trajectory_array
from qsodyn.family import make_params
from qsodyn.fixed_point import FixedPointReport
from qsodyn.stability import StabilityReport

P_EX = ["--a", "1", "--alpha", "3/8", "--c", "5/8", "--d", "0"]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_classify_example():
    code, out, _ = run(["classify", *P_EX])
    assert code == 0
    fp = json.loads(out)["fixed_points"]
    assert fp[0]["class"] == "attracting"
    assert fp[0]["moduli"] == pytest.approx([0.91287, 0.91287], abs=1e-5)
    StabilityReport.from_dict(fp[0])


def test_fixed_point_round_trip():
    code, out, _ = run(["fixed-point", *P_EX])
    rep = FixedPointReport.from_dict(json.loads(out))
    rep.check(make_params(1, "3/8", "5/8", 0))


def test_sweep_figure_data():
    code, out, _ = run(["sweep", "--alpha", "0", "--a", "0", "--c", "0.5", "--param", "e",
                        "--from", "0", "--to", "0.99", "--steps", "100"])
    assert code == 0
    table = rows(out)
    assert table[0] == ["e", "x3", "re_lambda1", "im_lambda1", "abs_lambda1", "abs_lambda2", "class"]
    assert len(table) == 101
    assert float(table[1][5]) > 1.0  # |lambda2| at e = 0


def test_sweep_e_keeps_c_to_d_ratio():
    from qsodyn.cli import swept_params

    q = swept_params(make_params(0, 0, 0.2, 0.6), "e", 0.6)
    assert q.c / q.d == pytest.approx(1 / 3)


def test_csv_uses_round_trip_digits():
    code, out, _ = run(["trajectory", *P_EX, "--x0", "0.2,0.3,0.5", "--n", "3"])
    table = rows(out)
    assert table[0] == ["n", "x1", "x2", "x3"] and len(table) == 5
    got = np.array([[float(v) for v in r[1:]] for r in table[1:]])
    want = trajectory_array(make_params(1, "3/8", "5/8", 0), SimplexPoint(0.2, 0.3, 0.5), 3)
    assert np.array_equal(got, want)


def test_orbit_e1():
    code, out, _ = run(["orbit", "--a", "0", "--alpha", "0", "--c", "0", "--d", "0", "--x0", "0.2,0.1,0.7"])
    rep = OrbitReport.from_dict(json.loads(out))
    assert rep.verdict.value == "ConvergesTo2Cycle"
    rep.check(make_params(0, 0, 0, 0))


def test_renormalize():
    code, out, err = run(["orbit", "--a", "0", "--alpha", "0", "--c", "0", "--d", "0", "--x0", "2,1,7"])
    assert code == 3 and json.loads(err)["error"] == "SimplexViolation"
    code, out, _ = run(["orbit", "--a", "0", "--alpha", "0", "--c", "0", "--d", "0", "--x0", "2,1,7", "--renormalize"])
    assert code == 0


def test_two_cycle_and_conjugacy():
    code, out, _ = run(["two-cycle", "--c", "0.5", "--d", "0.4"])
    TwoCycle.from_dict(json.loads(out)).check(make_params(0, 0, 0.5, 0.4))
    code, out, _ = run(["conjugacy", "--e", "1/4"])
    assert ConjugacyData.from_dict(json.loads(out)).mu == 3.0


def test_predict_e1():
    code, out, _ = run(["predict-e1", "--x0", "0.5,0,0.5"])
    obj = json.loads(out)
    assert obj["theta_infinite"] and obj["theta"] is None
    assert sorted([obj["even_limit"][0], obj["odd_limit"][0]]) == [0.0, 0.5]


@pytest.mark.parametrize("which, ncols", [("fig1", 4), ("fig2", 4), ("fig3", 3)])
def test_figures(which, ncols):
    code, out, _ = run(["figure", which, "--grid", "50"])
    table = rows(out)
    assert code == 0 and len(table[0]) == ncols and len(table) > 2


def test_fig1_meets_diagonal_at_one():
    table = rows(run(["figure", "fig1", "--grid", "101"])[1])
    assert table[-1][:2] == ["1", "1"]


def test_figure_regime_mismatch():
    code, _, err = run(["figure", "fig3", "--a", "0", "--alpha", "0.1", "--c", "0.5", "--d", "0.5"])
    assert code == 3 and json.loads(err)["error"] == "RegimeMismatch"


def test_validate_tensor_file(tmp_path):
    from qsodyn.core import dump_tensor
    from qsodyn.family import to_tensor

    path = tmp_path / "t.json"
    dump_tensor(to_tensor(make_params(0, 0, 0.5, 0.3)), path)
    code, out, _ = run(["validate", "--tensor", str(path)])
    assert json.loads(out)["operator_class"] == "QuasiStrictlyNonVolterra"
    code, _, err = run(["validate", "--tensor", str(tmp_path / "missing.json")])
    assert code == 4 and json.loads(err)["error"] == "IoError"


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (["fixed-point", "--a", "0"], 2, "ParseError"),
        (["fixed-point", "--a", "x", "--alpha", "0", "--c", "0", "--d", "0"], 2, "ParseError"),
        (["fixed-point", "--a", "0", "--alpha", "0", "--c", "0.7", "--d", "0.7"], 3, "ConstraintViolation"),
        (["two-cycle", "--c", "0.3", "--d", "0.3"], 3, "OutOfRange"),
        (["nonsense"], 2, "ParseError"),
    ],
)
def test_errors_are_json(argv, code, kind):
    got, out, err = run(argv)
    assert got == code and out == ""
    assert json.loads(err)["error"] == kind


def test_tolerance_env(monkeypatch):
    monkeypatch.setenv("QSO_DYN_TOL", "1e-3")
    _, out, _ = run(["fixed-point", *P_EX])
    assert json.loads(out)["tol"] == 1e-3
    _, out, _ = run(["fixed-point", *P_EX, "--tol", "1e-11"])
    assert json.loads(out)["tol"] == 1e-11


def test_out_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(["conjugacy", "--e", "0.3", "--out", str(path)])
    assert code == 0 and out == "" and json.loads(path.read_text())["e"] == 0.3


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", *P_EX],
        ["orbit", "--a", "0", "--alpha", "0", "--c", "0.5", "--d", "0.4", "--x0", "0.3,0.3,0.4"],
        ["figure", "fig3", "--grid", "20"],
    ],
)
def test_deterministic_subprocess(argv):
    cmd = [sys.executable, "-m", "qsodyn.cli", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
