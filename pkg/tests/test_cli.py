import json
import subprocess
import sys

import pytest

from dwbc.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestSubcommands:
    def test_zn_enum(self, capsys):
        code, out = run_cli(["zn", "--size", "3", "--weights", "1", "1", "1",
                             "--method", "enum"], capsys)
        assert code == 0
        assert json.loads(out) == {"N": 3, "method": "enum", "Z": "7"}

    def test_efp_mir_n(self, capsys):
        code, out = run_cli(["efp", "--size", "3", "--r", "2", "--s", "1",
                             "--weights", "1", "1", "1",
                             "--method", "mir-n"], capsys)
        assert code == 0
        assert json.loads(out)["F"] == "5/7"

    def test_verify(self, capsys):
        code, out = run_cli(["verify", "--suite", "cantini", "--trials", "5",
                             "--seed", "42"], capsys)
        assert code == 0
        assert json.loads(out)["failures"] == 0

    def test_hrow(self, capsys):
        code, out = run_cli(["hrow", "--size", "3", "--positions", "2",
                             "--weights", "1", "1", "1"], capsys)
        assert json.loads(out)["H"] == "3/7"

    def test_boundary(self, capsys):
        code, out = run_cli(["boundary", "--size", "3",
                             "--weights", "1", "1", "1"], capsys)
        assert json.loads(out)["h_coeffs"] == ["2/7", "3/7", "2/7"]

    def test_psi_methods_agree(self, capsys):
        base = ["psi", "--size", "4", "--which", "top", "--positions", "2,4",
                "--weights", "1", "2", "2"]
        vals = set()
        for method in ("oracle", "enum", "mir-new", "mir-coordinate",
                       "dual", "mir-origin"):
            code, out = run_cli(base + ["--method", method], capsys)
            assert code == 0
            vals.add(json.loads(out)["psi"])
        assert len(vals) == 1

    def test_psi_bottom_methods_agree(self, capsys):
        base = ["psi", "--size", "3", "--which", "bottom",
                "--positions", "1,3", "--weights", "1", "2", "2"]
        vals = set()
        for method in ("oracle", "enum", "mir", "dual"):
            code, out = run_cli(base + ["--method", method], capsys)
            assert code == 0
            vals.add(json.loads(out)["psi"])
        assert len(vals) == 1

    def test_trace(self, capsys):
        code, out = run_cli(["trace-efp", "--size", "3", "--r", "2", "--s",
                             "1", "--weights", "1", "1", "1"], capsys)
        data = json.loads(out)
        assert data["chain_breaks"] == 0
        assert all(step["value"] == "5/7" for step in data["steps"])

    def test_rational_weights(self, capsys):
        code, out = run_cli(["zn", "--size", "2", "--weights", "1/2", "3/4",
                             "5/6"], capsys)
        assert code == 0
        assert json.loads(out)["Z"] == "325/576"

    def test_inhomogeneous_ik(self, capsys):
        code, out = run_cli(["zn", "--size", "2", "--lambdas", "0.3", "0.7",
                             "--nus", "0.1", "0.2", "--eta", "0.4",
                             "--method", "ik"], capsys)
        assert code == 0
        code2, out2 = run_cli(["zn", "--size", "2", "--lambdas", "0.3", "0.7",
                               "--nus", "0.1", "0.2", "--eta", "0.4",
                               "--method", "enum"], capsys)
        z1 = float(json.loads(out)["Z"])
        z2 = float(json.loads(out2)["Z"])
        assert abs(z1 - z2) <= 1e-9 * max(1, abs(z1))


class TestContracts:
    def test_verify_all_suites(self, capsys):
        code, out = run_cli(["verify", "--suite", "all", "--trials", "2",
                             "--seed", "5"], capsys)
        assert code == 0
        data = json.loads(out)
        assert data["failures"] == 0
        assert set(data["suites"]) == {"kmst", "cantini", "psxx", "whom",
                                       "bigid", "c4", "tangent", "hierarchy",
                                       "crossing", "claim"}

    def test_byte_identical_runs(self, capsys):
        args = ["verify", "--suite", "kmst", "--trials", "4", "--seed", "11"]
        _, out1 = run_cli(args, capsys)
        _, out2 = run_cli(args, capsys)
        assert out1 == out2

    def test_csv_format(self, capsys):
        code, out = run_cli(["zn", "--size", "3", "--weights", "1", "1", "1",
                             "--format", "csv"], capsys)
        lines = out.strip().splitlines()
        assert lines[0] == "N,method,Z"
        assert lines[1] == "3,auto,7"

    def test_computation_error_exit_code(self, capsys):
        code = main(["zn", "--size", "99", "--weights", "1", "1", "1"])
        assert code == 1

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["zn", "--size", "3"])
        assert exc.value.code == 2

    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "dwbc.cli", "zn", "--size", "1",
             "--weights", "2", "3", "7"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["Z"] == "7"
