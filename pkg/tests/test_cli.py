import csv
import io
import json
import math

import pytest

from orbitsum import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    comments = [l for l in text.splitlines() if l.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:], comments


class TestGtRatio:
    def test_exact_output(self, capsys):
        code, out, _ = run_cli(["gt", "ratio", "--n", "2"], capsys)
        assert code == 0
        header, rows, comments = parse_csv(out)
        assert header == ["fraction", "decimal"]
        assert rows[0] == ["25/24", "1.0416666666666667"]
        assert comments[0].startswith("# generated-by=orbitsum/")
        assert "seed=0" in comments[0]


class TestPdf2:
    def test_boundary_and_interior_values(self, capsys):
        code, out, _ = run_cli(
            ["pdf2", "eigen", "--a", "1,0", "--b", "1,0", "--grid", "0:2:5"], capsys
        )
        assert code == 0
        _, rows, _ = parse_csv(out)
        table = {float(r[0]): float(r[1]) for r in rows}
        assert table[2.0] == 0.0  # closed-support edge
        assert table[1.0] == 0.5  # interior value d/(2 alpha beta)

    def test_diag_table_normalizes(self, capsys):
        code, out, _ = run_cli(["pdf2", "diag", "--a", "1,0", "--b", "1,0"], capsys)
        assert code == 0
        _, rows, _ = parse_csv(out)
        xs = [float(r[0]) for r in rows]
        vs = [float(r[1]) for r in rows]
        total = sum(
            0.5 * (vs[i] + vs[i + 1]) * (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)
        )
        assert abs(total - 1.0) < 1e-3  # trapezoid on the padded default grid

    def test_degenerate_orbit_exits_2(self, capsys):
        code, _, err = run_cli(["pdf2", "eigen", "--a", "1,1", "--b", "1,0"], capsys)
        assert code == 2
        assert "degenerate" in err


class TestQjsd:
    def test_value_at_origin(self, capsys):
        code, out, _ = run_cli(["qjsd", "--mu", "0", "--nu", "0"], capsys)
        assert code == 0
        _, rows, _ = parse_csv(out)
        assert abs(float(rows[0][2]) - (math.log(2.0) / 3.0 + 1.0 / 6.0)) < 1e-12

    def test_out_of_domain_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["qjsd", "--mu", "0.5", "--nu", "0"])
        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert "orbit parameter must lie in [0, 1/2)" in err

    def test_verify_appends_comparison(self, capsys):
        code, out, _ = run_cli(
            ["qjsd", "--mu", "0.1", "--nu", "0.2", "--verify", "--samples", "20000"], capsys
        )
        assert code == 0
        comment = [l for l in out.splitlines() if l.startswith("# comparison=")][0]
        payload = json.loads(comment.split("=", 1)[1])
        assert payload["pass"] is True
        assert payload["z_score"] < 3.0


class TestErrorPaths:
    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["gt", "ratio", "--n", "2", "--bogus"])
        assert exc.value.code == 2

    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2

    def test_wishart_m_gt_n_exits_2(self, capsys):
        code, _, err = run_cli(["wishart-sum", "--m", "3", "--n", "2", "--k", "1"], capsys)
        assert code == 2
        assert "m <= n" in err

    def test_numerics_error_exits_1(self, capsys, monkeypatch):
        from orbitsum.errors import NumericsError

        def explode(args, out):
            raise NumericsError("quadrature failed to converge")

        monkeypatch.setattr(cli, "_cmd_qjsd", explode)
        parser_cmds = cli.build_parser()
        code, _, err = run_cli(["qjsd", "--mu", "0.1", "--nu", "0.1"], capsys)
        assert code == 1
        assert "quadrature" in err


class TestReproducibility:
    def test_byte_identical_reruns(self, capsys):
        argv = ["gue-sum", "--n", "2", "--k", "2", "--verify", "--samples", "20000"]
        _, out1, _ = run_cli(argv, capsys)
        _, out2, _ = run_cli(argv, capsys)
        assert out1 == out2

    def test_gt_empirical_seeded(self, capsys):
        argv = ["gt", "empirical", "--n", "2", "--samples", "5000", "--seed", "7"]
        code, out1, _ = run_cli(argv, capsys)
        assert code == 0
        assert "seed=7" in out1.splitlines()[0]
        _, out2, _ = run_cli(argv, capsys)
        assert out1 == out2

    def test_csv_and_json_encode_identical_values(self, capsys):
        base = ["single-eig", "--n", "3", "--k", "2"]
        _, out_csv, _ = run_cli(base, capsys)
        _, out_json, _ = run_cli(base + ["--format", "json"], capsys)
        _, rows, _ = parse_csv(out_csv)
        decoded = json.loads(out_json)
        assert decoded["columns"] == ["x", "value"]
        for csv_row, json_row in zip(rows, decoded["rows"]):
            assert float(csv_row[0]) == json_row[0]
            assert float(csv_row[1]) == json_row[1]

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "table.csv"
        code, out, _ = run_cli(
            ["gt", "ratio", "--n", "3", "--out", str(target)], capsys
        )
        assert code == 0
        assert out == ""
        assert "1369/1248" in target.read_text()


class TestSurfaceAndDeriv:
    def test_surface_csv(self, capsys):
        code, out, _ = run_cli(["surface", "qjsd", "--grid", "3"], capsys)
        assert code == 0
        header, rows, _ = parse_csv(out)
        assert header == ["mu", "nu", "value"]
        assert len(rows) == 9

    def test_deriv_demo_wishart(self, capsys):
        code, out, _ = run_cli(["deriv", "demo", "--ensemble", "wishart", "--n", "2", "--k", "2"], capsys)
        assert code == 0
        _, rows, _ = parse_csv(out)
        table = dict(rows)
        assert table["exact_match"] == "true"
        assert "exp(" in table["engine_output"]

    def test_scan_with_fit(self, capsys):
        code, out, _ = run_cli(["gt", "scan", "--nmax", "8", "--fit", "4:8"], capsys)
        assert code == 0
        header, rows, comments = parse_csv(out)
        assert header == ["n", "ln_alpha"]
        assert len(rows) == 7
        fit_line = [c for c in comments if c.startswith("# fit=")][0]
        payload = json.loads(fit_line.split("=", 1)[1])
        assert payload["slope"] > 0
