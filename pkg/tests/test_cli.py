import json

import pytest

from gausszeta import cli


def run(argv):
    return cli.main(argv)


class TestParsing:
    def test_parse_complex(self):
        assert cli.parse_complex("2") == 2.0
        assert cli.parse_complex("1+2i") == 1 + 2j
        assert cli.parse_complex("0.5+9.5i") == 0.5 + 9.5j
        assert cli.parse_complex("1.5-0.5j") == 1.5 - 0.5j


class TestTraceCommand:
    def test_three_methods_with_deltas(self, tmp_path, capsys):
        out = tmp_path / "t.json"
        code = run(["trace", "--s", "2", "--methods", "closed,matrix,kernel",
                    "--kernel-terms", "24", "--output", str(out)])
        assert code == 0
        rows = json.loads(out.read_text())
        assert len(rows) == 3
        deltas = [float(v) for r in rows for k, v in r.items()
                  if k.startswith("delta_") and v != ""]
        assert deltas and max(deltas) < 1e-8

    def test_domain_gate_is_config_error(self, capsys):
        assert run(["trace", "--s", "0.4"]) == cli.EXIT_CONFIG
        assert "configuration error" in capsys.readouterr().err

    def test_orbit_row_has_tail_bound(self, tmp_path):
        out = tmp_path / "o.json"
        code = run(["trace", "--s", "1", "--n", "2", "--methods", "orbit",
                    "--max-digit", "100", "--output", str(out)])
        assert code == 0
        rows = json.loads(out.read_text())
        assert rows[0]["method"] == "orbit-sum"
        assert float(rows[0]["tail_bound"]) < 1e-8


class TestDetGrid:
    def test_single_point_real_positive(self, tmp_path):
        out = tmp_path / "d.json"
        assert run(["det-grid", "--s", "2", "--M", "48",
                    "--output", str(out)]) == 0
        row = json.loads(out.read_text())[0]
        assert 0.0 < float(row["zeta_det_re"]) < 1.0
        assert abs(float(row["zeta_det_im"])) < 1e-14

    def test_degenerate_grid(self, tmp_path):
        out = tmp_path / "g.csv"
        assert run(["det-grid", "--grid-start", "1.5", "--grid-end", "2.5",
                    "--count", "1", "--M", "32", "--format", "csv",
                    "--output", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 2  # header + one row

    def test_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["det-grid", "--grid-start", "1.2+0.5i", "--grid-end",
                "1.2+1.5i", "--count", "5", "--M", "32", "--format", "csv"]
        assert run(argv + ["--output", str(a)]) == 0
        assert run(argv + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestFindZeros:
    def test_perron_root(self, tmp_path):
        out = tmp_path / "z.json"
        assert run(["find-zeros", "--start", "1.05", "--which", "minus",
                    "--M", "48", "--output", str(out)]) == 0
        row = json.loads(out.read_text())[0]
        assert row["status"] == "OK"
        assert abs(float(row["root_re"]) - 1.0) < 1e-8

    def test_nonconvergent_is_flagged_not_fatal(self, tmp_path):
        out = tmp_path / "n.json"
        code = run(["find-zeros", "--start", "40", "--which", "minus",
                    "--M", "8", "--tol", "1e-15", "--output", str(out)])
        rows = json.loads(out.read_text()) if out.exists() else []
        if code == 0 and rows:
            assert rows[0]["status"] in ("OK", "NONCONV")
        else:
            assert code in (cli.EXIT_CONFIG,)


class TestCensus:
    def test_head_row(self, capsys):
        assert run(["census", "--norm-cap", "100"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("word,trace,norm")
        assert lines[1].startswith("1-1,3,")

    def test_empty_census(self, capsys):
        assert run(["census", "--norm-cap", "5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1

    def test_nonprimitive_flagged(self, capsys):
        assert run(["census", "--norm-cap", "100"]) == 0
        out = capsys.readouterr().out
        assert any(line.startswith("1-1-1-1,7,") and ",2," in line
                   for line in out.splitlines())


class TestVerifyCommand:
    def test_subset_passes(self, capsys):
        code = run(["verify", "--only",
                    "dynamics.norm_orbit_duality,operator.contraction"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.count("PASS") == 2
        assert "OK: 2/2" in out

    def test_injected_sign_error_fails(self, capsys):
        code = run(["verify", "--fast", "--inject-sign-error", "--only",
                    "operator.matrix_direct"])
        out = capsys.readouterr().out
        assert code == cli.EXIT_VERIFY
        assert "FAIL" in out
