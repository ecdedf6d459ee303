import json
import os
import subprocess
import sys

import jsonschema
import mpmath
import pytest

from cliquex import cli
from cliquex.asymptotics import AsymptoticParams, h_stationary_point
from cliquex.exact_engine import ModelParams, expectation_profile
from cliquex.numerics import precision
from cliquex.schemas import CSV_HEADERS, JSON_SCHEMAS

EXACT_EXAMPLE = '{"n":3,"p":"1/2","total":"2","per_size":{"1":"3/4","2":"9/8","3":"1/8"}}\n'

CASES = {
    "exact": [["-n", "3", "-p", "1/2", "--mode", "rational"], ["-n", "50", "-p", "0.3"]],
    "profile": [["-n", "3", "-p", "0.5"], ["-n", "6", "-p", "1/3", "--mode", "rational"]],
    "argmax": [["-n", "1000", "-p", "0.5"]],
    "asymptote": [["-n", "100", "-p", "0.5"], ["-n", "100", "-p", "0.5", "-x", "2", "-x", "5.5"]],
    "stationary": [["-n", "1000", "-p", "0.5"], ["-n", "2", "-p", "0.05"]],
    "residual-sweep": [["--n-grid", "2^10:2^12:x2", "-p", "0.5", "-p", "1/3"]],
    "simulate": [["-n", "5", "-p", "0.5", "--trials", "200", "--seed", "1"], ["-n", "6", "-r", "3", "-p", "0.5", "--trials", "50", "--seed", "2"]],
    "oracle": [["-n", "3", "-p", "1/2"], ["-n", "3", "-r", "3", "-p", "1/2"]],
    "hyper": [["-n", "8", "-r", "3", "-p", "0.5"], ["-n", "4", "-r", "3", "-p", "1/2", "--mode", "rational"], ["-n", "3", "-r", "2", "-p", "0.1"]],
    "conjecture": [["-n", "100", "-r", "3", "-p", "0.5"], ["--n-grid", "10:40:+10", "-r", "2", "-p", "0.5", "--constant", "1.5"]],
}
ALL = [(cmd, args) for cmd, variants in CASES.items() for args in variants]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_process(argv):
    return subprocess.run([sys.executable, "-m", "cliquex", *argv], capture_output=True, text=True, check=False)


def parse_exact(text):
    # keep the decimal literals intact so nothing passes through float
    return json.loads(text, parse_float=str)


class TestDispatchExamples:
    def test_exact_rational(self):
        proc = run_process(["exact", "-n", "3", "-p", "1/2", "--mode", "rational"])
        assert proc.returncode == 0
        assert proc.stdout == EXACT_EXAMPLE

    def test_unknown_flag(self):
        proc = run_process(["exact", "-n", "3", "-p", "1/2", "--bogus"])
        assert proc.returncode == 2
        assert proc.stdout == ""
        assert "usage:" in proc.stderr

    def test_simulate_repeatable(self):
        argv = ["simulate", "-n", "3", "-p", "0.5", "--trials", "100000", "--seed", "7"]
        first, second = run_process(argv), run_process(argv)
        assert first.returncode == 0
        assert first.stdout == second.stdout
        assert run_process(argv + ["--workers", "4"]).stdout == first.stdout


class TestSchemas:
    @pytest.mark.parametrize("cmd,args", ALL, ids=[f"{c}-{i}" for i, (c, _) in enumerate(ALL)])
    def test_json(self, cmd, args, capsys):
        code, out, _ = run([cmd, *args], capsys)
        assert code == 0
        assert out.endswith("\n") and out.count("\n") == 1
        jsonschema.validate(json.loads(out), JSON_SCHEMAS[cmd])

    @pytest.mark.parametrize("cmd,args", ALL, ids=[f"{c}-{i}" for i, (c, _) in enumerate(ALL)])
    def test_csv(self, cmd, args, capsys):
        code, out, _ = run([cmd, *args, "--format", "csv"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] in CSV_HEADERS[cmd]
        width = lines[0].count(",")
        assert len(lines) >= 2 and all(line.count(",") == width for line in lines[1:])

    def test_profile_csv_rows(self, capsys):
        _, out, _ = run(["profile", "-n", "3", "-p", "0.5", "--format", "csv"], capsys)
        lines = out.splitlines()
        assert lines[0] == "k,log_term" and len(lines) == 4

    def test_residual_sweep_rows(self, capsys):
        _, out, _ = run(["residual-sweep", "--n-grid", "2^10:2^14:x2", "-p", "0.5", "--format", "csv"], capsys)
        lines = out.splitlines()
        assert lines[0] == "n,p,log_total,residual"
        assert [line.split(",")[0] for line in lines[1:]] == ["1024", "2048", "4096", "8192", "16384"]

    def test_rationals_never_floats(self, capsys):
        for argv in (["oracle", "-n", "4", "-p", "1/3"], ["hyper", "-n", "5", "-r", "3", "-p", "2/7", "--mode", "rational"]):
            _, out, _ = run(argv, capsys)
            obj = json.loads(out)
            assert isinstance(obj["total"], str)
            assert all(isinstance(v, str) for v in obj["per_size"].values())

    def test_schema_rejects_float_rational(self):
        bad = {"n": 3, "p": "1/2", "total": 2.0, "per_size": {"1": "3/4"}}
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, JSON_SCHEMAS["oracle"])


class TestRoundTrip:
    @pytest.mark.parametrize("bits", [53, 128, 200])
    def test_exact_log_total(self, bits, capsys):
        _, out, _ = run(["exact", "-n", "1000", "-p", "0.3", "--precision-bits", str(bits)], capsys)
        obj = parse_exact(out)
        assert obj["precision_bits"] == bits
        want = expectation_profile(ModelParams(1000, "0.3"), bits).log_total
        with precision(bits):
            assert mpmath.mpf(obj["log_total"]) == want

    def test_stationary(self, capsys):
        _, out, _ = run(["stationary", "-n", "1024", "-p", "1/2"], capsys)
        obj = parse_exact(out)
        with precision(128):
            assert mpmath.mpf(obj["x_tilde"]) == h_stationary_point(AsymptoticParams(1024, "1/2"))

    def test_shortest(self):
        assert cli.format_real(mpmath.mpf(0.5), 128) == "0.5"
        with precision(128):
            third = mpmath.mpf(1) / 3
        text = cli.format_real(third, 128)
        with precision(128):
            assert mpmath.mpf(text) == third
            assert mpmath.mpf(text[:-1]) != third

    def test_env_precision(self):
        env = {**os.environ, "CLIQUEX_PRECISION_BITS": "64"}
        proc = subprocess.run([sys.executable, "-m", "cliquex", "argmax", "-n", "100", "-p", "0.5"], capture_output=True, text=True, env=env, check=True)
        assert json.loads(proc.stdout)["precision_bits"] == 64


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [[], ["nope"], ["exact", "-n", "3"], ["exact", "-n", "x", "-p", "0.5"], ["exact", "-n", "3", "-p", "abc"], ["residual-sweep", "--n-grid", "1:2:3:4", "-p", "0.5"]],
    )
    def test_usage(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 2 and out == "" and err

    @pytest.mark.parametrize(
        "argv",
        [
            ["exact", "-n", "3", "-p", "1.5"],
            ["exact", "-n", "0", "-p", "0.5"],
            ["stationary", "-n", "1", "-p", "0.5"],
            ["hyper", "-n", "2", "-r", "3", "-p", "0.5"],
            ["simulate", "-n", "3", "-p", "0.5", "--trials", "0", "--seed", "1"],
            ["conjecture", "-r", "3", "-p", "0.5"],
        ],
    )
    def test_domain(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 3 and out == "" and "domain error" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["exact", "-n", "41", "-p", "1/2", "--mode", "rational"],
            ["oracle", "-n", "7", "-p", "1/2"],
            ["oracle", "-n", "7", "-r", "3", "-p", "1/2"],
            ["simulate", "-n", "65", "-p", "0.5", "--trials", "1", "--seed", "1"],
        ],
    )
    def test_resource(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 4 and out == "" and "resource cap" in err

    def test_io(self, tmp_path, capsys):
        code, _, err = run(["argmax", "-n", "10", "-p", "0.5", "-o", str(tmp_path / "missing" / "x.json")], capsys)
        assert code == 5 and "cannot write" in err

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "r.json"
        code, out, _ = run(["exact", "-n", "3", "-p", "1/2", "--mode", "rational", "-o", str(path)], capsys)
        assert code == 0 and out == ""
        assert path.read_text() == EXACT_EXAMPLE


class TestGrid:
    def test_forms(self):
        assert cli.parse_n_grid("2^10:2^13:x2") == [1024, 2048, 4096, 8192]
        assert cli.parse_n_grid("10:40:+10") == [10, 20, 30, 40]
        assert cli.parse_n_grid("5,1e3,2^4") == [5, 1000, 16]
