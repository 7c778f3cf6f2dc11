import csv
import io
import json
import math
import subprocess
import sys

import pytest

from renyilab.cli import run
from renyilab.core import Pmf
from renyilab.probe import F_curve, default_t_grid

UNIFORM4 = '{"offset":0,"probs":[0.25,0.25,0.25,0.25]}'
TRI = '{"offset":-1,"probs":[0.25,0.5,0.25]}'


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestExamples:
    def test_entropy_uniform(self, capsys):
        code, out, _ = call(capsys, "entropy", "--pmf", UNIFORM4, "--order", "1")
        assert code == 0 and "1.386294" in out

    def test_counterexample(self, capsys):
        code, out, _ = call(capsys, "probe", "counterexample")
        assert code == 1
        assert "COUNTEREXAMPLE FOUND" in out and "[0.25, 0.5, 1.0, 0.5, 0.25]" in out
        assert "0.000927902" in out

    def test_rs_geometric(self, capsys):
        code, doc = as_json(capsys, "rs", "--geometric", "0.5", "--order", "2")
        assert code == 0
        (row,) = doc
        assert row["lhs"] == pytest.approx(math.log(9 / 5), abs=1e-12)
        assert row["rhs"] == pytest.approx(math.log(2)) and row["verdict"] == "PASS"

    def test_rs_small_theta_uses_closed_form(self, capsys):
        code, doc = as_json(capsys, "rs", "--geometric", "1e-5", "--order", "3")
        assert code == 0 and doc[0]["method"] == "closed-form"
        assert abs(doc[0]["lhs"] - math.log(2)) < 1e-4


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["entropy", "--pmf", "{not json"],
        ["entropy", "--pmf", '{"offset":0,"probs":[0.5,-0.5,1.0]}'],
        ["entropy", "--pmf", '{"offset":0,"probs":[0.5,0.4]}'],
        ["entropy", "--pmf", UNIFORM4, "--order", "-2"],
        ["entropy", "--pmf", UNIFORM4, "--order", "abc"],
        ["entropy", "--pmf", "@/nonexistent/file.json"],
        ["entropy"],
        ["entropy", "--geometric", "1.5"],
        ["check", "theorem", "--pmf", '{"offset":0,"probs":[0.4,0.1,0.5]}', "--order", "2"],
        ["majorize", UNIFORM4],
        ["frobnicate"],
        [],
        ["scan", "sharpness", "--thetas", "0.5,x"],
    ])
    def test_usage_errors(self, capsys, argv):
        code, out, err = call(capsys, *argv)
        assert code == 2
        assert err.startswith("renyilab: error:") and err.count("\n") == 1

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("RENYILAB_SEED", "seven")
        code, _, err = call(capsys, "probe", "search", "--trials", "5")
        assert code == 2 and "RENYILAB_SEED" in err

    def test_check_failures_exit_one(self, capsys):
        code, _, _ = call(capsys, "check", "logconcave", "--pmf", '{"offset":0,"probs":[0.4,0.1,0.5]}')
        assert code == 1
        code, _, _ = call(capsys, "check", "monotone", "--pmf", TRI)
        assert code == 1
        code, _, _ = call(capsys, "majorize", UNIFORM4, '{"offset":0,"probs":[1.0]}')
        assert code == 1

    def test_passing_checks_exit_zero(self, capsys):
        for argv in (["check", "logconcave", "--pmf", TRI],
                     ["check", "theorem", "--pmf", TRI],
                     ["check", "tsg-lemma", "--tsg", "0.3,0.6,0"],
                     ["extremal", "--pmf", TRI],
                     ["majorize", '{"offset":0,"probs":[1.0]}', UNIFORM4],
                     ["majorize", '{"offset":0,"probs":[0.5,0.5]}', "--tsg", "0.5,0,0"],
                     ["scan", "sharpness"],
                     ["scan", "rslimit", "--thetas", "0.5,0.1"],
                     ["probe", "kcheck", "--seq", "[1, 0.6667, 0.3333]"]):
            code, _, err = call(capsys, *argv)
            assert code == 0, (argv, err)

    def test_complex_probe_finding(self, capsys):
        code, out, _ = call(capsys, "probe", "complex", "--trials", "20")
        assert code == 1 and "COUNTEREXAMPLE FOUND" in out


class TestOutputs:
    def test_bits_scale_entropy_only(self, capsys):
        _, nats = as_json(capsys, "entropy", "--pmf", TRI)
        _, bits = as_json(capsys, "entropy", "--pmf", TRI, "--bits")
        for a, b in zip(nats, bits):
            assert b["value"] == pytest.approx(a["value"] / math.log(2), rel=1e-15)
            assert a["order"] == b["order"] and a["method"] == b["method"]
            assert a["unit"] == "nats" and b["unit"] == "bits"

    def test_bits_leave_ratios_alone(self, capsys):
        _, nats = as_json(capsys, "extremal", "--pmf", TRI)
        _, bits = as_json(capsys, "extremal", "--pmf", TRI, "--bits")
        assert nats["tsg"] == bits["tsg"]
        assert bits["H_inf"] == pytest.approx(1.0, rel=1e-15)

    def test_pmf_json_round_trip(self, capsys):
        text = '{"offset": 3, "probs": [0.1, 0.2, 0.3, 0.4]}'
        _, doc = as_json(capsys, "check", "monotone", "--pmf", text)
        assert Pmf.from_dict(doc["pmf"]) == Pmf.from_json(text)

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "f.json"
        path.write_text(TRI)
        _, a = as_json(capsys, "entropy", "--pmf", "@" + str(path))
        _, b = as_json(capsys, "entropy", "--pmf", TRI)
        assert a == b

    def test_csv_curve_full_precision(self, capsys):
        code, out, _ = call(capsys, "probe", "fcurve", "--seq", "[1, 0.5, 0.25]")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["t", "value", "d2value"]
        expected = F_curve([1, 0.5, 0.25], default_t_grid())
        assert len(rows) == len(expected) + 1
        for row, exp in zip(rows[1:], expected):
            assert tuple(float(v) for v in row) == exp

    def test_kcurve(self, capsys):
        code, out, _ = call(capsys, "probe", "kcurve", "--seq", "[1, 0.5]", "--gamma", "2",
                            "--ts=-1,0,1")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and len(rows) == 4

    def test_table_format(self, capsys):
        _, out, _ = call(capsys, "entropy", "--pmf", TRI, "--order", "inf")
        header, line = out.splitlines()
        assert header.split() == ["order", "value", "unit", "method"]
        assert line.split()[1] == format(math.log(2), ".7g")


class TestDeterminism:
    def test_same_seed_same_bytes(self, capsys):
        argv = ["probe", "search", "--trials", "200", "--seed", "11", "--format", "json"]
        _, a, _ = call(capsys, *argv)
        _, b, _ = call(capsys, *argv)
        assert a == b
        _, c, _ = call(capsys, *argv[:-3], "12", "--format", "json")
        assert c != a

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("RENYILAB_SEED", "11")
        _, from_env, _ = call(capsys, "probe", "search", "--trials", "200", "--format", "json")
        monkeypatch.delenv("RENYILAB_SEED")
        _, explicit, _ = call(capsys, "probe", "search", "--trials", "200", "--seed", "11",
                              "--format", "json")
        assert from_env == explicit


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "renyilab", "entropy", "--pmf", UNIFORM4,
                           "--order", "2", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert float(proc.stdout.splitlines()[1].split(",")[1]) == pytest.approx(math.log(4))
