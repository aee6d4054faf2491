import io
import json
import math
import subprocess
import sys

import pytest

from kellylab.cli import run


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def json_of(argv):
    code, out, err = invoke(argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def files(tmp_path):
    demo = tmp_path / "demo.csv"
    demo.write_text("date,a,b\n1,1.1,0.9\n2,1.2,0.8\n")
    scen = tmp_path / "scen.csv"
    scen.write_text("prob,a,b\n0.5,2.0,1.0\n0.5,0.5,1.0\n")
    race = tmp_path / "race.csv"
    race.write_text("date,a,b\n1,2,0\n2,0,2\n3,2,0\n")
    return {"demo": str(demo), "scen": str(scen), "race": str(race), "dir": tmp_path}


class TestKelly:
    def test_edge(self):
        d = json_of(["kelly", "--p", "0.6", "--r", "2"])
        assert d["f_star"] == pytest.approx(0.2, abs=1e-15)
        assert d["g_star_nats"] == pytest.approx(0.020136, abs=5e-7)
        assert d["g_star_bits"] == pytest.approx(0.029049, abs=5e-7)
        assert d["no_edge"] is False

    def test_no_edge_is_an_answer(self):
        d = json_of(["kelly", "--p", "0.5", "--r", "2"])
        assert d["f_star"] == 0.0 and d["no_edge"] is True

    def test_ruinous_fraction_reported(self):
        d = json_of(["kelly", "--p", "0.6", "--r", "2", "--f", "1"])
        assert d["ruin"] is True and d["g_f_nats"] == "-inf"


def test_expand_with_matrix(files):
    d = json_of(["expand", "--assets", "2", "--periods", "2", "--weights", "0.5,0.5",
                 "--matrix", files["demo"]])
    assert d["terms"] == 4
    assert d["rel_err"] <= 1e-9
    assert d["lhs"] == pytest.approx(1.0, abs=1e-15)


def test_expand_shape_mismatch(files):
    code, _, err = invoke(["expand", "--assets", "2", "--periods", "3", "--weights", "0.5,0.5",
                           "--matrix", files["demo"]])
    assert code == 1 and "periods" in err


def test_budget_exceeded_exits_one():
    code, out, err = invoke(["expand", "--weights", "0.5,0.5", "--assets", "2", "--periods", "5",
                             "--budget", "10"])
    assert code == 1 and out == "" and err


def test_horse_race_fair_odds():
    d = json_of(["horse-race", "--probs", "0.7,0.3", "--returns", "2,2", "--weights", "0.5,0.5"])
    assert d["total_nats"] == pytest.approx(0.0, abs=1e-15)
    assert d["kl_market_nats"] == pytest.approx(0.0822828785050518, abs=1e-15)
    ruin = json_of(["horse-race", "--probs", "0.5,0.5", "--returns", "2,2", "--weights", "1,0"])
    assert ruin["ruin"] is True and ruin["ruin_horse"] == 1


def test_optimize(files):
    d = json_of(["optimize", "--scenarios", files["scen"]])
    assert d["certified"] is True
    # stationary point of 0.5 ln(1 + w) + 0.5 ln(1 - w/2)
    assert d["w_star"] == pytest.approx([0.5, 0.5], abs=1e-6)


def test_winner_fraction(files):
    d = json_of(["winner-fraction", "--scenarios", files["scen"]])
    assert d["entropy_bound_bits"] == pytest.approx(1.0)
    assert d["status"] == "satisfied"
    assert d["gap_bits"] <= d["entropy_bound_bits"]


def test_concentration_rows():
    rows = json_of(["concentration", "--weights", "0.5,0.5", "--periods", "4"])
    assert len(rows) == 5
    assert all(r["sandwich_ok"] for r in rows)
    total = math.fsum(math.exp(r["exact_log_mass"]) for r in rows)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_dominant_reports_non_types():
    rows = json_of(["dominant", "--weights", "0.5,0.5", "--periods", "3,4"])
    assert rows[0]["not_a_type"] is True and rows[0]["approx_log"] is None
    assert rows[1]["not_a_type"] is False and rows[1]["per_period_gap"] >= 0


def test_compare_horse_race_ruin(files):
    code, _, err = invoke(["compare", "--returns", files["race"], "--wa", "1,0", "--wb", "0.5,0.5"])
    assert code == 1 and "b" in err
    d = json_of(["compare", "--returns", files["race"], "--wa", "1,0", "--wb", "0.5,0.5",
                 "--horse-race"])
    assert d["delta_bits"] == "inf" and d["ruin_a"] is True


def test_synth_out_round_trips(files):
    out = files["dir"] / "synth.csv"
    code, stdout, _ = invoke(["synth", "--periods", "200", "--probs", "0.7,0.3",
                              "--returns", "2,2", "--seed", "5", "--out", str(out)])
    assert code == 0 and stdout == ""
    d = json_of(["compare", "--returns", str(out), "--wa", "0.5,0.5", "--wb", "0.7,0.3",
                 "--horse-race"])
    assert d["n_periods"] == 200


class TestFormats:
    def test_csv(self):
        code, out, _ = invoke(["kelly", "--p", "0.6", "--r", "2", "--format", "csv"])
        header, row = out.strip().split("\n")
        assert "f_star" in header.split(",")
        assert len(header.split(",")) == len(row.split(","))

    def test_text(self):
        code, out, _ = invoke(["kelly", "--p", "0.6", "--r", "2", "--format", "text"])
        assert code == 0 and "f_star: " in out

    def test_field_types_stable(self, files):
        a = json_of(["kelly", "--p", "0.6", "--r", "2"])
        b = json_of(["kelly", "--p", "0.3", "--r", "2"])
        assert {k: type(v) for k, v in a.items()} == {k: type(v) for k, v in b.items()}


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["bogus"],
            ["kelly", "--p", "0.6"],
            ["kelly", "--p", "x", "--r", "2"],
            ["horse-race", "--probs", "0.5,-0.5", "--returns", "2,2"],
            ["kelly", "--p", "0.6", "--r", "2", "--format", "xml"],
        ],
    )
    def test_usage_errors(self, argv):
        code, out, err = invoke(argv)
        assert code == 2 and out == ""

    @pytest.mark.parametrize(
        "argv",
        [
            ["kelly", "--p", "1.5", "--r", "2"],
            ["horse-race", "--probs", "0.5,0.5", "--returns", "2,2,2"],
            ["optimize", "--scenarios", "/nonexistent/file.csv"],
        ],
    )
    def test_domain_errors(self, argv):
        code, out, err = invoke(argv)
        assert code == 1 and out == "" and err.startswith("kellylab ")


def test_entry_point_subprocess(files):
    argv = [sys.executable, "-m", "kellylab", "winner-fraction", "--scenarios", files["scen"],
            "--seed", "3"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
    bad = subprocess.run([sys.executable, "-m", "kellylab", "nope"], capture_output=True)
    assert bad.returncode == 2 and bad.stderr
