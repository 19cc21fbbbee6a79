"""Command-line front end: flags, exit codes, JSON reports."""

import json

import pytest

from certint.cli import run


class TestSubcommands:
    def test_integral(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        rc = run(["integral", "--f", "x^2", "--a", "0", "--b", "1",
                  "--abstol", "1e-6", "--json", str(path)])
        assert rc == 0
        report = json.loads(path.read_text())
        assert abs(report["estimate"] - 1 / 3) <= 1e-6
        assert report["diagnostics"]["exit_flags"] == 0
        assert report["command"] == "integral"

    def test_funmin(self, capsys):
        rc = run(["funmin", "--f", "(x-0.3)^2+1", "--abstol", "1e-6",
                  "--tolx", "1e-3"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "estimate = 1" in out

    def test_funappx_grid_dump(self, tmp_path):
        path = tmp_path / "r.json"
        rc = run(["funappx", "--f", "x^2", "--grid", "5",
                  "--json", str(path)])
        assert rc == 0
        report = json.loads(path.read_text())
        assert len(report["grid"]["xs"]) == 5
        assert report["grid"]["ys"][-1] == pytest.approx(1.0, abs=1e-6)

    def test_meanmcber(self, tmp_path):
        path = tmp_path / "r.json"
        rc = run(["meanmcber", "--p", "0.111111", "--abstol", "1e-2",
                  "--alpha", "0.05", "--seed", "1", "--json", str(path)])
        assert rc == 0
        report = json.loads(path.read_text())
        assert abs(report["estimate"] - 1 / 9) <= 1e-2

    def test_cubsobol(self, tmp_path):
        path = tmp_path / "r.json"
        rc = run(["cubsobol", "--f", "prod(x)", "--dim", "2",
                  "--box", "0,1;0,1", "--abstol", "1e-5", "--reltol", "0",
                  "--seed", "7", "--json", str(path)])
        assert rc == 0
        report = json.loads(path.read_text())
        assert abs(report["estimate"] - 0.25) <= 1e-5

    def test_cubmc_normal_box(self):
        # leading dash in the value needs the --flag=value spelling
        rc = run(["cubmc", "--f", "exp(-x1^2-x2^2)",
                  "--box=-inf,inf;-inf,inf", "--measure", "normal",
                  "--abstol", "0", "--reltol", "1e-2", "--seed", "3"])
        assert rc == 0

    def test_meanmc_expression(self):
        rc = run(["meanmc", "--f", "x^2", "--abstol", "1e-3",
                  "--reltol", "0", "--alpha", "0.05", "--seed", "2"])
        assert rc == 0


class TestErrors:
    def test_unknown_flag(self):
        assert run(["integral", "--nope", "1"]) == 1

    def test_missing_expression(self):
        assert run(["integral", "--abstol", "1e-6"]) == 1

    def test_parse_error(self):
        assert run(["integral", "--f", "x +* 2"]) == 1

    def test_invalid_box(self):
        assert run(["cubmc", "--f", "x1", "--box", "0,inf"]) == 1

    def test_infinite_box_needs_normal(self):
        assert run(["cublattice", "--f", "x1", "--box=-inf,inf"]) == 1

    def test_warning_exit_code(self):
        # tolerance unreachable inside a tiny budget: documented warning flag
        rc = run(["integral", "--f", "sin(50*x)", "--a", "0", "--b", "6",
                  "--abstol", "1e-14", "--nmax", "300"])
        assert rc == 2


class TestJson:
    def test_roundtrip_byte_identical(self, tmp_path):
        path = tmp_path / "r.json"
        run(["integral", "--f", "x^2", "--json", str(path)])
        text = path.read_text()
        again = json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"
        assert again == text

    def test_seeded_subcommand_deterministic(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        args = ["cublattice", "--f", "prod(x)", "--dim", "2",
                "--box", "0,1;0,1", "--abstol", "1e-5", "--reltol", "0",
                "--transform", "c1sin", "--seed", "11"]
        run(args + ["--json", str(p1)])
        run(args + ["--json", str(p2)])
        assert p1.read_bytes() == p2.read_bytes()
