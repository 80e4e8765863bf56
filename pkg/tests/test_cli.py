"""Matrix file grammar and CLI dispatch."""

import contextlib
import io
import json
import os

import pytest
from gmpy2 import mpq

from eigenbound.cli import dispatch
from eigenbound.errors import ParseError
from eigenbound.eigenstructure import ExactMatrix
from eigenbound.exactpoly import GaussianRational
from eigenbound.fuzzharness import SplitMix64
from eigenbound.matio import format_matrix, parse_matrix

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


def run_cli(*argv) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = dispatch(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestParse:
    def test_identity(self):
        m = parse_matrix("matrix 2 2\n1 0\n0 1\n")
        assert m == ExactMatrix.identity(2)

    def test_complex_entry(self):
        m = parse_matrix("matrix 1 1\n3/4,-1/2\n")
        assert m.entry(0, 0) == GaussianRational(mpq(3, 4), mpq(-1, 2))

    def test_comments_and_blank_lines(self):
        text = "# heading\n\nmatrix 1 2   # trailing comment\n5 -2/3\n\n# done\n"
        m = parse_matrix(text)
        assert m.rows == 1 and m.cols == 2
        assert m.entry(0, 1) == GaussianRational(mpq(-2, 3))

    def test_not_lowest_terms_normalized(self):
        m = parse_matrix("matrix 1 1\n2/4\n")
        assert m.entry(0, 0) == GaussianRational(mpq(1, 2))

    def test_missing_final_newline_ok(self):
        assert parse_matrix("matrix 1 1\n7").entry(0, 0) == 7

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("", "missing"),
            ("matrix 2\n", "header"),
            ("grid 2 2\n", "expected header"),
            ("matrix 0 2\n", "positive"),
            ("matrix 1 1\n1/0\n", "zero denominator"),
            ("matrix 1 1\nbogus\n", "malformed"),
            ("matrix 1 2\n1\n", "expected 2"),
            ("matrix 1 1\n1 2\n", "has 2 entries"),
            ("matrix 1 1\n1\n9\n", "trailing"),
            ("matrix 2 2\n1 0\n", "expected 2 rows"),
            ("matrix 1 1\n1,2,3\n", "malformed"),
        ],
    )
    def test_rejects(self, text, fragment):
        with pytest.raises(ParseError) as err:
            parse_matrix(text)
        assert fragment in str(err.value)
        assert err.value.line >= 1 and err.value.column >= 1

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_matrix("matrix 1 3\n1 1/0 2\n")
        assert (err.value.line, err.value.column) == (2, 3)


class TestRoundTrip:
    def test_random_matrices(self):
        stream = SplitMix64(2024)
        for _ in range(20):
            n = stream.randint(1, 5)
            m = ExactMatrix(
                n, n,
                [
                    GaussianRational(
                        mpq(stream.randint(-9, 9), stream.randint(1, 7)),
                        mpq(stream.randint(-9, 9), stream.randint(1, 7)),
                    )
                    for _ in range(n * n)
                ],
            )
            assert parse_matrix(format_matrix(m)) == m

    def test_format_is_stable(self):
        m = parse_matrix(format_matrix(ExactMatrix.identity(3)))
        assert format_matrix(m) == format_matrix(ExactMatrix.identity(3))


class TestDispatch:
    def test_analyze_text(self):
        code, out, _ = run_cli("analyze", fixture("identity3.mat"))
        assert code == 0
        assert "distinct eigenvalues: 1" in out
        assert "defectivity: 0" in out
        assert "derogatory index: 2" in out

    def test_bound_json_schema(self):
        code, out, _ = run_cli(
            "bound", "--a", fixture("worked_A.mat"), "--b", fixture("worked_B.mat"),
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert list(doc) == [
            "n", "rank_b", "distinct_a", "defectivity_a", "derogatory_a",
            "distinct_c", "defectivity_c", "derogatory_c", "farrell_bound",
            "improved_bound", "actual_distinct", "slack", "s1_size", "s2_size",
            "checks",
        ]
        assert doc["farrell_bound"] == 4
        assert doc["improved_bound"] == 3
        assert doc["actual_distinct"] == 3
        assert all(
            set(check) == {"name", "applicable", "holds", "detail"}
            for check in doc["checks"]
        )
        assert all(check["holds"] for check in doc["checks"])

    def test_bound_text_stable(self):
        first = run_cli("bound", "--a", fixture("worked_A.mat"), "--b", fixture("worked_B.mat"))
        second = run_cli("bound", "--a", fixture("worked_A.mat"), "--b", fixture("worked_B.mat"))
        assert first == second
        assert first[0] == 0

    def test_split_json(self):
        code, out, _ = run_cli("split", fixture("worked_A.mat"), "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["rem46_min_bound"] <= doc["cor44_bound"] <= doc["rem45_bound"]
        assert doc["distinct_a"] <= doc["rem46_min_bound"]

    def test_examples_json(self):
        code, out, _ = run_cli("examples", "--n", "6", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert [row["improved_bound"] for row in doc["family"]] == [3, 5, 7, 9, 11]
        assert doc["worked_example"]["slack"] == 0

    def test_fuzz_json_byte_identical(self):
        argv = ("fuzz", "--n", "3..4", "--rank", "1..2", "--trials", "12",
                "--seed", "31337", "--format", "json")
        code1, out1, err1 = run_cli(*argv)
        code2, out2, err2 = run_cli(*argv)
        assert code1 == code2 == 0
        assert out1 == out2  # elapsed lives on stderr, not in the body
        assert "elapsed" in err1 and "elapsed" in err2
        doc = json.loads(out1)
        assert doc["violations"] == 0
        assert doc["trials_run"] == 12

    def test_fuzz_single_value_args(self):
        code, out, _ = run_cli("fuzz", "--n", "4", "--rank", "2", "--trials", "5",
                               "--seed", "1", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["config"]["n_min"] == doc["config"]["n_max"] == 4

    def test_usage_errors_exit_two(self):
        assert run_cli()[0] == 2
        assert run_cli("bound", "--a", fixture("worked_A.mat"))[0] == 2
        assert run_cli("fuzz", "--n", "x", "--rank", "1", "--trials", "1", "--seed", "1")[0] == 2

    def test_missing_file_exits_two(self):
        code, _, err = run_cli("analyze", "no-such-file.mat")
        assert code == 2
        assert "error" in err

    def test_parse_error_exits_two(self, tmp_path):
        bad = tmp_path / "bad.mat"
        bad.write_text("matrix 2 2\n1 2\n3 1/0\n")
        code, _, err = run_cli("analyze", str(bad))
        assert code == 2
        assert "zero denominator" in err

    def test_dimension_mismatch_exits_two(self, tmp_path):
        small = tmp_path / "small.mat"
        small.write_text("matrix 2 2\n1 0\n0 1\n")
        code, _, err = run_cli("bound", "--a", fixture("worked_A.mat"), "--b", str(small))
        assert code == 2
        assert "mismatch" in err

    def test_rectangular_analyze_exits_two(self, tmp_path):
        rect = tmp_path / "rect.mat"
        rect.write_text("matrix 1 2\n1 2\n")
        assert run_cli("analyze", str(rect))[0] == 2

    def test_fuzz_plot_writes_figure(self, tmp_path):
        target = tmp_path / "slack.png"
        code, _, err = run_cli("fuzz", "--n", "3", "--rank", "1", "--trials", "4",
                               "--seed", "2", "--plot", str(target))
        assert code == 0
        assert target.exists() and target.stat().st_size > 0
        assert "figure" in err

    def test_examples_plot_writes_figure(self, tmp_path):
        target = tmp_path / "family.png"
        code, _, _ = run_cli("examples", "--n", "5", "--plot", str(target))
        assert code == 0
        assert target.exists() and target.stat().st_size > 0
