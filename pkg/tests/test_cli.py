import csv
import io
import json

import numpy as np
import pytest

from lapcut.cli import main


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


@pytest.fixture
def path_instance(tmp_path):
    g = write(tmp_path, "g.txt", "0 1 1\n1 2 1\n")
    b = write(tmp_path, "b.txt", "0 1\n2 -1\n")
    return g, b


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolveCommand:
    def test_basic_document(self, path_instance, capsys):
        g, b = path_instance
        code, out, _ = run(capsys, ["solve", g, b, "--epsilon", "0.01",
                                    "--seed", "3", "--root", "2",
                                    "--oracle-check"])
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "lapcut-result/1"
        assert doc["iterations"] > 0
        assert doc["tau"] == pytest.approx(2.0)
        assert doc["potentials"][2] == 0.0
        assert doc["oracle_check"]["relative_error"] <= 0.02

    def test_epsilon_one_zero_iterations(self, path_instance, capsys):
        g, b = path_instance
        code, out, _ = run(capsys, ["solve", g, b, "--epsilon", "1.0"])
        assert code == 0
        doc = json.loads(out)
        assert doc["iterations"] == 0
        assert doc["potentials"] == [0.0, 0.0, 0.0]

    def test_byte_identical_reruns(self, path_instance, capsys):
        g, b = path_instance
        args = ["solve", g, b, "--seed", "9", "--trace", "periteration"]
        _, out1, _ = run(capsys, args)
        _, out2, _ = run(capsys, args)
        assert out1 == out2

    def test_trace_rows(self, path_instance, capsys):
        g, b = path_instance
        code, out, _ = run(capsys, ["solve", g, b, "--trace", "withgap",
                                    "--max-iters", "5"])
        doc = json.loads(out)
        assert len(doc["trace"]) == 5
        row = doc["trace"][0]
        assert set(row) == {"t", "edge", "delta", "bound", "gap"}

    def test_out_file(self, path_instance, tmp_path, capsys):
        g, b = path_instance
        out_path = tmp_path / "res.json"
        code, out, _ = run(capsys, ["solve", g, b, "--out", str(out_path)])
        assert code == 0 and out == ""
        assert json.loads(out_path.read_text())["schema"] == "lapcut-result/1"

    def test_parse_error_exit_2(self, tmp_path, capsys):
        g = write(tmp_path, "bad.txt", "a b\n")
        b = write(tmp_path, "b.txt", "0 0\n")
        code, _, err = run(capsys, ["solve", g, b])
        assert code == 2
        assert "bad.txt:1" in err

    def test_validation_error_exit_3(self, tmp_path, capsys):
        g = write(tmp_path, "g.txt", "0 1 1\n2 3 1\n")   # disconnected
        b = write(tmp_path, "b.txt", "0 0\n")
        code, _, err = run(capsys, ["solve", g, b])
        assert code == 3
        assert "connected" in err

    def test_imbalanced_supply_exit_3(self, tmp_path, capsys):
        g = write(tmp_path, "g.txt", "0 1 1\n")
        b = write(tmp_path, "b.txt", "0 1\n1 1\n")
        code, _, err = run(capsys, ["solve", g, b])
        assert code == 3

    def test_missing_file_exit_2(self, tmp_path, capsys):
        code, _, err = run(capsys, ["solve", str(tmp_path / "nope.txt"),
                                    str(tmp_path / "also-nope.txt")])
        assert code == 2

    def test_bad_epsilon_exit_2(self, path_instance, capsys):
        g, b = path_instance
        code, _, err = run(capsys, ["solve", g, b, "--epsilon", "2.0"])
        assert code == 2
        assert "epsilon" in err

    def test_root_out_of_range_exit_2(self, path_instance, capsys):
        g, b = path_instance
        code, _, err = run(capsys, ["solve", g, b, "--root", "99"])
        assert code == 2


class TestBenchCommand:
    def test_row_count_and_determinism(self, capsys):
        args = ["bench", "--n", "12", "--m", "20", "--trials", "3",
                "--epsilon", "0.1", "--seed", "5", "--solvers", "both"]
        code, out1, _ = run(capsys, args)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out1)))
        assert len(rows) == 6   # both solvers per trial
        assert {r["solver"] for r in rows} == {"cut", "cycle"}
        assert all(r["schema"] == "lapcut-bench/1" for r in rows)
        assert all(float(r["rel_l_error"]) >= 0.0 for r in rows)
        _, out2, _ = run(capsys, args)
        strip = lambda text: [{k: v for k, v in row.items() if k != "wall_time_s"}
                              for row in csv.DictReader(io.StringIO(text))]
        assert strip(out1) == strip(out2)

    def test_solver_aliases(self, capsys):
        code, out, _ = run(capsys, ["bench", "--n", "8", "--m", "12",
                                    "--trials", "1", "--epsilon", "0.5",
                                    "--solvers", "dual"])
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["solver"] for r in rows] == ["cut"]

    def test_m_too_small_exit_2(self, capsys):
        code, _, err = run(capsys, ["bench", "--n", "10", "--m", "3",
                                    "--trials", "1"])
        assert code == 2

    def test_csv_out(self, tmp_path, capsys):
        target = tmp_path / "bench.csv"
        code, out, _ = run(capsys, ["bench", "--n", "6", "--m", "8",
                                    "--trials", "1", "--epsilon", "0.5",
                                    "--csv-out", str(target)])
        assert code == 0 and out == ""
        assert target.read_text().startswith("schema,trial,solver")


class TestStretchCommand:
    def test_tree_graph(self, tmp_path, capsys):
        g = write(tmp_path, "g.txt", "0 1 1\n1 2 1\n")
        code, out, _ = run(capsys, ["stretch", g])
        assert code == 0
        fields = dict(line.split(": ", 1) for line in out.strip().splitlines())
        assert float(fields["stretch"]) == 2.0
        assert float(fields["tau"]) == 2.0
        assert float(fields["rel_diff"]) <= 1e-9

    def test_triangle_mst(self, tmp_path, capsys):
        g = write(tmp_path, "g.txt", "0 1 1\n1 2 1\n0 2 1\n")
        code, out, _ = run(capsys, ["stretch", g, "--tree", "mst"])
        fields = dict(line.split(": ", 1) for line in out.strip().splitlines())
        assert float(fields["stretch"]) == 4.0

    def test_disconnected_exit_3(self, tmp_path, capsys):
        g = write(tmp_path, "g.txt", "0 1 1\n2 3 1\n")
        code, _, err = run(capsys, ["stretch", g])
        assert code == 3

    def test_byte_identical_reruns(self, tmp_path, capsys):
        g = write(tmp_path, "g.txt", "0 1 1\n1 2 2\n0 2 3\n2 3 0.5\n1 3 4\n")
        _, out1, _ = run(capsys, ["stretch", g, "--tree", "bfs", "--root", "1"])
        _, out2, _ = run(capsys, ["stretch", g, "--tree", "bfs", "--root", "1"])
        assert out1 == out2


class TestOmvDemoCommand:
    def test_exact_agreement(self, capsys):
        code, out, _ = run(capsys, ["omv-demo", "--n", "16", "--queries", "16",
                                    "--alpha", "1", "--seed", "4"])
        assert code == 0
        assert "agreement: 16/16 agree" in out

    def test_alpha_two(self, capsys):
        code, out, _ = run(capsys, ["omv-demo", "--n", "8", "--queries", "8",
                                    "--alpha", "2", "--seed", "4"])
        assert code == 0
        assert "agreement: 8/8 agree" in out
        fields = dict(line.split(": ", 1) for line in out.strip().splitlines())
        assert float(fields["big_value"]) > 0.0

    def test_zero_queries(self, capsys):
        code, out, _ = run(capsys, ["omv-demo", "--n", "1", "--queries", "0"])
        assert code == 0
        assert "agreement: 0/0 agree" in out

    def test_deterministic(self, capsys):
        args = ["omv-demo", "--n", "10", "--queries", "12", "--seed", "3"]
        _, out1, _ = run(capsys, args)
        _, out2, _ = run(capsys, args)
        assert out1 == out2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "lapcut" in capsys.readouterr().out
