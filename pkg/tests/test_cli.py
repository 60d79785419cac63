import json
import shlex
from pathlib import Path

import pytest

from competing_binomials import cli
from competing_binomials.records import OutputRecord

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_COMMANDS = {
    "compute_exact.json": "compute --alpha 3/10 --n 1 --r 1 --d 1 --method exact --out compute_exact.json",
    "trace_exact.csv": "trace --alpha 0.3 --r 1 --d 1 --n-from 0 --n-to 10 --method exact --out trace_exact.csv",
    "classify.json": "classify --alpha 0.2 --r 3 --d 1 --out classify.json",
}


def run(capsys, line):
    code = cli.main(shlex.split(line))
    out, err = capsys.readouterr()
    return code, out, err


def record(out, fmt="json"):
    return OutputRecord.from_json(out) if fmt == "json" else OutputRecord.from_csv(out)


@pytest.mark.parametrize("name", sorted(GOLDEN_COMMANDS))
def test_golden_bytes(name, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(shlex.split(GOLDEN_COMMANDS[name])) == 0
    assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes()


class TestCompute:
    def test_both_agree(self, capsys):
        code, out, _ = run(capsys, "compute --alpha 1/2 --n 10 --r 1 --d 1 --method both")
        f = record(out).fields
        assert code == 0 and f["p_exact"] == "1/2" and f["p_quadrature"] == "0.5" and f["agree"] is True

    def test_exact(self, capsys):
        code, out, _ = run(capsys, "compute --alpha 3/10 --n 1 --r 1 --d 1 --method exact")
        assert code == 0 and record(out).fields["p_exact"] == "48/125"

    def test_large_n_quadrature(self, capsys):
        from competing_binomials.phases import limit_constant

        code, out, _ = run(capsys, "compute --alpha 0.3 --n 100000 --r 2 --d 1 --method quadrature")
        p = float(record(out).fields["p_quadrature"])
        assert code == 0
        assert p == pytest.approx(0.5 + limit_constant(0.3, 2, 1) / 100000**0.5, abs=1e-6)

    def test_disagreement_exit(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "p_quadrature", lambda params: 0.0)
        code, out, _ = run(capsys, "compute --alpha 1/3 --n 2 --r 1 --d 1")
        assert code == cli.EXIT_DISAGREE and record(out).fields["agree"] is False

    def test_exact_guard(self, capsys):
        code, _, err = run(capsys, "compute --alpha 1/3 --n 6000 --r 1 --d 1 --method exact")
        assert code == cli.EXIT_USAGE and "5000" in err

    @pytest.mark.parametrize(
        "line",
        [
            "compute --alpha 1.5 --n 1 --r 1 --d 1",
            "compute --alpha abc --n 1 --r 1 --d 1",
            "compute --alpha 1/2 --n 1 --r 0 --d 1",
            "compute --alpha 1/2 --r 1 --d 1",
            "nonsense",
            "",
        ],
    )
    def test_usage_errors(self, capsys, line):
        assert run(capsys, line)[0] == cli.EXIT_USAGE


class TestTrace:
    def test_figure_one_shape(self, capsys):
        code, out, _ = run(capsys, "trace --alpha 0.3 --r 1 --d 1 --n-to 50")
        rec = record(out, "csv")
        assert code == 0 and rec.columns == ["n", "p", "diff", "second_diff", "p_float"]
        assert len(rec.rows) == 51
        assert all(row[2][0] != "-" for row in rec.rows)
        assert all(row[3][0] == "-" for row in rec.rows)

    def test_unimodal_column(self, capsys):
        code, out, _ = run(capsys, "trace --alpha 1/5 --r 3 --d 1 --n-to 50 --method quadrature")
        p = [float(row[1]) for row in record(out, "csv").rows]
        top = p.index(max(p))
        assert code == 0 and 0 < top < 50

    def test_constant(self, capsys):
        code, out, _ = run(capsys, "trace --alpha 0.5 --r 1 --d 1 --n-to 10 --format json")
        rec = record(out)
        assert code == 0 and {row[1] for row in rec.rows} == {"1/2"}

    def test_both(self, capsys):
        code, out, _ = run(capsys, "trace --alpha 2/5 --r 3 --d 2 --n-from 5 --n-to 20 --method both")
        rec = record(out, "csv")
        assert code == 0 and rec.fields["agree"] is True and rec.rows[0][0] == "5"

    def test_bad_range(self, capsys):
        assert run(capsys, "trace --alpha 0.3 --r 1 --d 1 --n-from 5 --n-to 2")[0] == cli.EXIT_USAGE


class TestClassify:
    def test_unimodal(self, capsys):
        code, out, _ = run(capsys, "classify --alpha 0.2 --r 3 --d 1")
        f = record(out).fields
        assert code == 0 and f["regime"] == "Unimodal" and f["family"] == "r>=2d" and f["subcase"] == "b"

    def test_dual_case(self, capsys):
        f = record(run(capsys, "classify --alpha 0.6 --r 5 --d 4")[1]).fields
        assert (f["family"], f["subcase"]) == ("d<=r<=2d-2", "a")
        assert f["dual"] == {"alpha": "2/5", "r": 5, "d": 2}

    def test_constant(self, capsys):
        assert record(run(capsys, "classify --alpha 0.5 --r 3 --d 2")[1]).fields["regime"] == "ConstantHalf"


class TestMode:
    def test_mode(self, capsys):
        code, out, _ = run(capsys, "mode --alpha 403/2400 --r 3 --n-max 200")
        f = record(out).fields
        assert code == 0 and 0.8 <= float(f["mode_ratio"]) <= 1.2

    def test_beyond_range(self, capsys):
        code, _, err = run(capsys, "mode --alpha 251/1000 --r 2 --n-max 5")
        assert code == cli.EXIT_USAGE and "n <= 5" in err


class TestVerify:
    def test_identities(self, capsys):
        code, out, _ = run(capsys, "verify --suite identities")
        rec = record(out)
        assert code == 0 and rec.fields["passed"] is True
        names = {row[0] for row in rec.rows}
        assert {"comb2_sum_equals_4^n", "duality", "poly_chebyshev_equals_derivatives", "poly_at_one"} <= names

    def test_failure_exit(self, capsys, monkeypatch):
        from competing_binomials import verification

        bad = lambda: verification.Check("always_fails", False, "forced")  # noqa: E731
        monkeypatch.setitem(verification.SUITES, "oracle", [bad])
        code, out, _ = run(capsys, "verify --suite oracle --format csv")
        assert code == cli.EXIT_VERIFY and record(out, "csv").fields["failed"] == ["always_fails"]


class TestSimulate:
    def test_duel(self, capsys):
        code, out, _ = run(capsys, "simulate --alpha 3/10 --n 1 --r 1 --d 1 --trials 200000 --seed 3")
        f = record(out).fields
        assert code == 0 and f["p_exact"] == "48/125" and f["within_4sigma"] is True

    def test_deterministic(self, capsys):
        line = "simulate --alpha 2/7 --n 4 --r 2 --d 1 --trials 50000 --seed 9"
        a = record(run(capsys, line)[1]).fields
        b = record(run(capsys, line + " --workers 3")[1]).fields
        assert a == b

    def test_doubleexp(self, capsys):
        code, out, _ = run(capsys, "simulate-doubleexp --alpha 0.3 --n 3 --trials 200000 --seed 2")
        f = record(out).fields
        assert code == 0 and f["p_exact"] == "10377/25000" and f["within_4sigma"] is True

    def test_doubleexp_needs_positive_n(self, capsys):
        assert run(capsys, "simulate-doubleexp --alpha 0.3 --n 0 --trials 10")[0] == cli.EXIT_USAGE


def test_out_file(tmp_path, capsys):
    target = tmp_path / "c.json"
    assert cli.main(["compute", "--alpha", "1/2", "--n", "3", "--r", "1", "--d", "1", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["fields"]["agree"] is True


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run(
        [sys.executable, "-m", "competing_binomials", "compute", "--alpha", "1/2", "--n", "1", "--r", "1", "--d", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and '"p_exact": "1/2"' in res.stdout
