import csv
import io
import json
import os
from fractions import Fraction

import pytest

from chatelet import cli, harness
from chatelet.constructor import enumerate_family
from chatelet.oracle import count_B
from chatelet.transfer import certify_transfer


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestIdentity:
    def test_sides_agree(self):
        lhs, rhs = harness.identity_sides()
        assert lhs.coeffs == rhs.coeffs == (529, 0, 192, 0, 24, 0, 1)
        assert harness.verify_identity() is None

    def test_pointwise_range_is_checked(self):
        assert harness.verify_identity(-3, 3) is None


class TestMultiplicity:
    def test_histogram(self):
        m = harness.MultiplicityStats.from_values([5, 5, 7, 9, 9, 9])
        assert m.histogram == {1: 1, 2: 1, 3: 1}
        assert (m.maximum, m.total, m.distinct) == (3, 6, 3)

    def test_empty(self):
        m = harness.MultiplicityStats.from_values([])
        assert (m.maximum, m.total, m.distinct) == (0, 0, 0)


class TestConstruct:
    def test_records_and_certification(self, p112):
        X = 10**9
        run_ = harness.construct(p112, X)
        assert run_.oracle_failures == []
        assert run_.class_bound_violations == []
        assert run_.oracle_skipped == 0
        assert run_.oracle_confirmed == len(run_.records) > 0
        for rec in run_.records:
            assert tuple(rec) == harness.JSONL_KEYS
            s, u, v = harness.record_to_solution(rec)
            assert abs(s.n) <= X
            assert u * u + v * v == p112(s.n)
            z = certify_transfer(p112, s)
            assert (z.re, z.im) == (u, v)
        keys = [(int(r["alpha"]), int(r["beta"]), int(r["v1"])) for r in run_.records]
        assert keys == sorted(keys)

    def test_window_counts(self, p112):
        X = 10**9
        run_ = harness.construct(p112, X)
        ns = [s.n for s in enumerate_family(p112, X) if 1 <= s.n <= X]
        assert run_.row.constructive_total == len(ns)
        assert run_.row.constructive_distinct == len(set(ns))
        assert harness.constructive_distinct(p112, X)[:2] == (len(ns), len(set(ns)))

    def test_shards_do_not_change_output(self, p112):
        a = harness.construct(p112, 10**10, shards=1)
        b = harness.construct(p112, 10**10, shards=3)
        assert harness.jsonl_text(a.records) == harness.jsonl_text(b.records)
        assert harness.csv_text([a.row]) == harness.csv_text([b.row])


class TestFit:
    def test_loglog_exact_power(self):
        xs = [10, 100, 1000, 10_000]
        slope, resid = harness.fit_loglog(xs, [x**0.5 for x in xs])
        assert slope == pytest.approx(0.5)
        assert resid == pytest.approx(0.0, abs=1e-12)

    def test_loglog_drops_zeros(self):
        slope, _ = harness.fit_loglog([1, 10, 100], [0, 10, 100])
        assert slope == pytest.approx(1.0)

    def test_fit_rows(self, p112):
        report = harness.fit(p112, [10**6, 10**7, 10**8], cutoff=10**5)
        assert [r.X for r in report.rows] == [10**6, 10**7, 10**8]
        assert all(r.count_B is None for r in report.rows)
        assert all(r.slope == report.slope for r in report.rows)

    def test_fit_needs_three_points(self, p112):
        with pytest.raises(ValueError):
            harness.fit(p112, [10**6, 10**8])


class TestSerialization:
    def test_csv_header_and_blanks(self):
        row = harness.DensityRow("1,1,2", 10, None, 7)
        text = harness.csv_text([row])
        assert text == 'poly,X,c,count_B,constructive_total,constructive_distinct,max_multiplicity,max_height_ratio,slope\n"1,1,2",10,,7,,,,,\n'

    def test_csv_float_format(self):
        row = harness.DensityRow("0,0,3", 10**6, Fraction(1), 5, 4, 3, 2, 0.1234567, 0.3333333)
        assert harness.csv_text([row]).splitlines()[1] == '"0,0,3",1000000,1,5,4,3,2,0.123457,0.333333'

    def test_jsonl_numbers_are_strings(self, p112):
        recs = harness.construct(p112, 10**8).records
        line = harness.jsonl_text(recs[:1])
        assert line.endswith("\n") and " " not in line
        obj = json.loads(line)
        assert all(isinstance(obj[k], str) for k in ("n", "alpha", "beta", "v1", "u", "v"))
        assert all(isinstance(c, str) for c in obj["omega1"] + obj["omega2"])

    def test_write_atomic_replaces(self, tmp_path):
        path = tmp_path / "out.csv"
        path.write_text("old")
        harness.write_atomic(str(path), "new\n")
        assert path.read_bytes() == b"new\n"
        assert os.listdir(tmp_path) == ["out.csv"]

    def test_write_atomic_cleans_up_on_failure(self, tmp_path):
        path = tmp_path / "out.csv"
        path.write_text("old")

        class Boom:
            def __str__(self):
                raise RuntimeError

        with pytest.raises(TypeError):
            harness.write_atomic(str(path), Boom())
        assert path.read_text() == "old"
        assert os.listdir(tmp_path) == ["out.csv"]


class TestCli:
    def test_check_ok(self, capsys):
        code, out, _ = run(capsys, "check", "--poly", "1,1,2")
        assert code == 0
        assert "poly: x^3 + x^2 + x + 2" in out
        assert "construction applies: yes" in out

    def test_check_reducible(self, capsys):
        code, out, _ = run(capsys, "check", "--poly", "0,0,-8")
        assert code == 2
        assert "integer root 2" in out

    def test_check_parity(self, capsys):
        code, out, _ = run(capsys, "check", "--poly", "0,0,16")
        assert code == 3
        assert "a1*a2-a0 = -16: even (FAIL)" in out

    def test_construct_parity_exit(self, capsys):
        code, _, _ = run(capsys, "construct", "--poly", "0,0,16", "--limit", "10**6")
        assert code == 3

    def test_construct_reducible_exit(self, capsys):
        code, _, _ = run(capsys, "construct", "--poly", "0,0,-8", "--limit", "10**6")
        assert code == 2

    def test_construct_files(self, capsys, tmp_path):
        emit, csv_path = tmp_path / "sols.jsonl", tmp_path / "row.csv"
        code, out, _ = run(
            capsys, "construct", "--poly", "1,1,2", "--limit", "1e9", "--emit", str(emit), "--csv", str(csv_path)
        )
        assert code == 0
        recs = harness.read_jsonl(str(emit))
        assert len(recs) > 0
        assert csv_path.read_text().startswith("poly,X,c,")
        assert "# oracle:" in out and "0 failed" in out

    def test_construct_stdout_is_jsonl(self, capsys):
        code, out, err = run(capsys, "construct", "--poly", "1,1,2", "--limit", "10**8")
        assert code == 0
        for line in out.splitlines():
            assert tuple(json.loads(line)) == harness.JSONL_KEYS
        assert err.startswith("poly,X,c,")

    def test_count(self, capsys):
        code, out, err = run(capsys, "count", "--poly", "0,0,17", "--limit", "10")
        assert code == 0
        assert out.splitlines()[1] == '"0,0,17",10,,8,,,,,'
        assert "count_B = 8" in err

    def test_count_matches_library(self, capsys, p112):
        code, out, _ = run(capsys, "count", "--poly", "1,1,2", "--limit", "2000", "--shards", "2")
        assert code == 0
        assert int(rows(out)[0]["count_B"]) == count_B(p112, 2000)

    def test_fit(self, capsys, tmp_path):
        path = tmp_path / "fit.csv"
        code, _, err = run(
            capsys, "fit", "--poly", "1,1,2", "--grid", "10**4,10**5,10**6,10**7", "--cutoff", "10**5", "--emit", str(path)
        )
        assert code == 0
        table = rows(path.read_text())
        assert [r["X"] for r in table] == ["10000", "100000", "1000000", "10000000"]
        # count_B is only computed up to the cutoff
        assert [r["count_B"] != "" for r in table] == [True, True, False, False]
        assert len({r["slope"] for r in table}) == 1
        assert err.startswith("slope = ")

    def test_verify_identity(self, capsys):
        code, out, _ = run(capsys, "verify-identity")
        assert code == 0 and out.startswith("ok:")

    @pytest.mark.parametrize(
        "n, text", [("746", "yes (11,25)"), ("3", "no (3^1)"), ("--", None), ("363025", None)]
    )
    def test_oracle(self, capsys, n, text):
        if n == "--":
            code, out, _ = run(capsys, "oracle", "--", "-5")
            assert code == 0 and out.strip() == "no (negative)"
            return
        code, out, _ = run(capsys, "oracle", n)
        assert code == 0
        if text:
            assert out.strip() == text
        else:
            assert out.startswith("yes (")

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["bogus"],
            ["check"],
            ["check", "--poly", "1,2"],
            ["count", "--poly", "0,0,17", "--limit", "0"],
            ["count", "--poly", "0,0,17", "--limit", "ten"],
            ["fit", "--poly", "1,1,2", "--grid", "10**6"],
            ["construct", "--poly", "1,1,2", "--limit", "100", "--c", "-1"],
            ["construct", "--poly", "1,1,2", "--limit", "100", "--shards", "0"],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            code = cli.main(argv)
            raise SystemExit(code)
        assert exc.value.code == 64

    def test_int_arg_forms(self):
        assert cli._int_arg("10**6") == cli._int_arg("1e6") == cli._int_arg("1_000_000") == 10**6
