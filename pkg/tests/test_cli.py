import csv
import io
import json
import math
import subprocess
import sys

import pytest

from abessel.algebra import LaurentPoly
from abessel.cli import main
from abessel.verify import VerifyReport, dumps


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestShow:
    def test_constant(self):
        code, text = run("show", "--q", "2", "--l", "0", "--m", "0", "--beta", "3")
        assert code == 0
        assert text.splitlines()[0] == "3"
        assert "norm_sq (a^2) = 1/9" in text and "sign(a) = +1" in text

    def test_reflected(self):
        code, text = run("show", "--q", "2", "--l", "-1", "--m", "0", "--beta", "1")
        assert code == 0 and text.splitlines()[0] == "1"

    def test_out_of_range(self, capsys):
        code, _ = run("show", "--q", "2", "--l", "1", "--m", "0", "--beta", "1")
        assert code == 2
        assert "OutOfRange" in capsys.readouterr().err

    def test_half_integer_index(self):
        code, text = run("show", "--q", "3", "--l=-1/2", "--m", "0", "--beta", "2")
        assert code == 0
        assert "sign(a) = undefined" in text

    def test_bad_parity(self):
        assert run("show", "--q", "2", "--l", "1/2", "--m", "0", "--beta", "1")[0] == 2

    def test_json(self):
        code, text = run("show", "--q", "2", "--l", "0", "--m", "-1", "--beta", "5/2", "--format", "json")
        data = json.loads(text)
        assert code == 0
        assert LaurentPoly.parse(data["poly"]) == LaurentPoly({0: -5, -1: "25/4"})
        assert data["order"] == 2 and data["sign"] in (1, -1)

    def test_missing_flag(self):
        assert run("show", "--q", "2")[0] == 2


class TestTable:
    def test_normalized_constant(self):
        code, text = run("table", "--q", "2", "--l", "0", "--m", "0", "--beta", "3", "--points", "5")
        rows = list(csv.reader(io.StringIO(text)))
        assert code == 0
        assert rows[0][1].endswith("[normalized]")
        assert [float(r[1]) for r in rows[1:]] == [1.0] * 5

    def test_worked_value(self):
        code, text = run("table", "--q", "2", "--l", "0", "--m", "-1", "--beta", "1",
                         "--x-from", "1", "--x-to", "2", "--points", "2")
        rows = list(csv.reader(io.StringIO(text)))
        assert code == 0 and float(rows[1][0]) == 1.0
        assert abs(abs(float(rows[1][1])) - 1 / math.sqrt(2)) < 1e-12

    def test_unnormalized_when_sign_undefined(self):
        code, text = run("table", "--q", "3", "--l=-1/2", "--m", "0", "--beta", "1", "--format", "json")
        assert code == 0 and json.loads(text)["normalization"] == "unnormalized"

    def test_seventeen_digits(self):
        _, text = run("table", "--q", "2", "--l", "0", "--m", "-1", "--beta", "1", "--x-from", "0.3", "--x-to", "0.7", "--points", "3")
        for row in list(csv.reader(io.StringIO(text)))[1:]:
            assert float(row[1]) == float(f"{float(row[1]):.17g}")

    @pytest.mark.parametrize("bad", [["--points", "1"], ["--x-from", "2", "--x-to", "1"], ["--x-from", "0"]])
    def test_bad_grid(self, bad):
        assert run("table", "--q", "2", "--l", "0", "--m", "0", "--beta", "1", *bad)[0] == 2


class TestGenfun:
    def test_fixed_l_json(self):
        code, text = run("genfun", "--kind", "fixed-l", "--q", "2", "--l=-1", "--beta", "1", "--order", "12", "--format", "json")
        assert code == 0 and json.loads(text)["equal_up_to"] == 13

    def test_text(self):
        code, text = run("genfun", "--kind", "diag-odd", "--q", "6", "--k", "1", "--beta", "2", "--order", "3")
        assert code == 0 and "equal_up_to=4 of 4" in text
        assert text.count("==") == 4

    def test_missing_value(self):
        assert run("genfun", "--kind", "diag-odd", "--q", "6", "--beta", "2")[0] == 2
        assert run("genfun", "--kind", "fixed-l", "--q", "6", "--beta", "2")[0] == 2

    def test_env_default_order(self, monkeypatch):
        monkeypatch.setenv("ABESSEL_DEFAULT_ORDER", "3")
        code, text = run("genfun", "--kind", "antidiag-odd", "--q", "2", "--k", "0", "--beta", "1", "--format", "json")
        assert code == 0 and json.loads(text)["order"] == 3


class TestVerify:
    def test_ode(self):
        code, text = run("verify", "--check", "ode", "--q", "6", "--beta", "1")
        assert code == 0 and text.startswith("ode")

    def test_genfun_single(self):
        code, text = run("verify", "--check", "genfun", "--kind", "fixed-l", "--q", "2", "--l=-1", "--beta", "1",
                         "--order", "12", "--format", "json")
        data = json.loads(text)
        assert code == 0 and data["status"] == "pass"
        assert data["counts"]["pass"] == 1

    def test_ladder_even_q_strict(self):
        assert run("verify", "--check", "ladder", "--q", "2", "--beta", "1", "--strict")[0] == 0

    def test_ladder_odd_q_strict(self):
        code, text = run("verify", "--check", "ladder", "--q", "3", "--beta", "1", "--strict")
        assert code == 1 and "degraded:" in text

    def test_degraded_passes_without_strict(self):
        code, text = run("verify", "--check", "ladder", "--q", "3", "--beta", "1")
        assert code == 0 and "warning" in text

    def test_env_order(self, monkeypatch):
        monkeypatch.setenv("ABESSEL_DEFAULT_ORDER", "4")
        _, text = run("verify", "--check", "genfun", "--q", "2", "--beta", "1", "--k", "0", "--format", "json")
        assert json.loads(text)["parameters"]["order"] == 4

    @pytest.mark.parametrize("control,check", [("ode", "ode"), ("genfun", "genfun"), ("weight", "orthogonality")])
    def test_negative_controls_fail(self, control, check):
        code, _ = run("verify", "--check", check, "--q", "2,3", "--beta", "1", "--order", "4",
                      "--negative-control", control)
        assert code == 1

    def test_negative_control_wrong_check(self):
        assert run("verify", "--check", "shape", "--negative-control", "ode")[0] == 2

    @pytest.mark.parametrize("argv", [
        ["verify", "--check", "nope"],
        ["verify", "--q", "0"],
        ["verify", "--beta", "-1"],
        ["verify", "--beta", "x"],
        ["frobnicate"],
    ])
    def test_usage_errors(self, argv):
        assert run(*argv)[0] == 2

    def test_json_round_trip(self):
        _, text = run("verify", "--check", "reflection", "--q", "3,4", "--beta", "5/2", "--format", "json")
        reports = json.loads(text)
        assert dumps(reports) + "\n" == text
        first = VerifyReport.from_dict(reports[0]) if isinstance(reports, list) else VerifyReport.from_dict(reports)
        assert first.to_json() == dumps(reports[0] if isinstance(reports, list) else reports)

    def test_report_round_trip_all_fields(self):
        _, text = run("verify", "--check", "shape", "--q", "2", "--beta", "1", "--format", "json")
        data = json.loads(text)
        assert VerifyReport.from_dict(data).to_json() + "\n" == text


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "abessel.cli", "show", "--q", "2", "--l", "0", "--m", "0", "--beta", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("3\n")
