import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from secrelay import analytics as an
from secrelay.cli import main, scenario_from_dict
from secrelay.exceptions import ParameterError
from secrelay.params import SystemParams

ROOT = Path(__file__).resolve().parents[1]
DEFAULT = str(ROOT / "scenarios" / "default.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_proc(*argv, workers=None):
    env = dict(os.environ)
    if workers is not None:
        env["SECRELAY_WORKERS"] = str(workers)
    return subprocess.run([sys.executable, "-m", "secrelay", *argv], capture_output=True,
                          env=env, check=False)


@pytest.fixture
def scenario(tmp_path):
    def write(**doc):
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(doc))
        return str(path)
    return write


class TestScenario:
    def test_defaults_fill_missing_keys(self):
        s = scenario_from_dict({})
        assert s.params == SystemParams()

    def test_db_conversion(self):
        s = scenario_from_dict({"snr_s_db": 20, "snr_max_db": 0})
        assert s.params.p_s == pytest.approx(100.0)
        assert s.params.p_max == 1.0

    @pytest.mark.parametrize("doc", [
        {"p_s": 10}, {"rho": 1.5}, {"epsilon": 0}, {"n_r": 10.5}, {"mc": {"runs": 3}},
        {"snr_s_db": "10"}, {"mc": {"seed": -1}}, [],
    ])
    def test_invalid(self, doc):
        with pytest.raises(ParameterError):
            scenario_from_dict(doc)


class TestAnalyze:
    def test_defaults(self, capsys):
        code, out, _ = run(capsys, "analyze", DEFAULT)
        assert code == 0
        assert "r_l                : 0.255843" in out
        assert "11.1111 (10.46 dB" in out
        assert "C_soc raw          : 19.6248 kbps" in out
        assert "min antennas       : 26" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "analyze", DEFAULT, "--json")
        r = json.loads(out)
        assert code == 0
        assert r["r_l"] == pytest.approx(0.2558427881, rel=1e-9)
        assert r["p_r_star"] == pytest.approx(100 / 9)
        assert r["c_soc_raw"] == pytest.approx(19624.84504, rel=1e-9)
        assert r["p0"] == pytest.approx(1.522997974e-08, rel=1e-9)
        assert r["saturation_limit"] == pytest.approx(19651.97371, rel=1e-9)
        assert r["feasible"] is True

    def test_fixed_strategy(self, capsys):
        code, out, _ = run(capsys, "analyze", DEFAULT, "--strategy", "fixed", "--p-r-db", "15",
                           "--json")
        assert code == 0
        assert json.loads(out)["p_r"] == pytest.approx(31.6227766, rel=1e-8)

    def test_p_r_db_implies_fixed(self, capsys):
        _, out, _ = run(capsys, "analyze", DEFAULT, "--p-r-db", "10", "--json")
        assert json.loads(out)["strategy"] == "fixed"

    def test_fixed_above_ceiling(self, capsys):
        code, _, err = run(capsys, "analyze", DEFAULT, "--p-r-db", "20")
        assert code == 2
        assert "exceeds p_max" in err

    def test_infeasible(self, capsys, scenario):
        code, _, err = run(capsys, "analyze", scenario(n_r=20, alpha_re=5, epsilon=0.01,
                                                       rho=0.9, alpha_rd=1))
        assert code == 3
        assert "n_r >= 26" in err

    def test_infeasible_ok_for_ip(self, capsys, scenario):
        code, out, _ = run(capsys, "analyze", scenario(n_r=20), "--strategy", "ipmin", "--json")
        assert code == 0
        assert json.loads(out)["saturation_limit"] is None

    def test_validation_errors(self, capsys, scenario, tmp_path):
        assert run(capsys, "analyze", scenario(bogus=1))[0] == 2
        assert run(capsys, "analyze", scenario(rho=0.0))[0] == 2
        assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert run(capsys, "analyze", str(bad))[0] == 2

    def test_json_round_trip(self, capsys, tmp_path):
        _, first, _ = run(capsys, "analyze", DEFAULT, "--json")
        report = tmp_path / "report.json"
        report.write_text(first)
        _, second, _ = run(capsys, "analyze", str(report), "--json")
        assert first == second


class TestSimulate:
    def test_soc_close_to_closed_form(self, capsys):
        code, out, _ = run(capsys, "simulate", DEFAULT, "--target", "soc", "--trials", "100000",
                           "--seed", "42", "--p-r-db", "10", "--json")
        r = json.loads(out)
        assert code == 0
        assert r["value"] == pytest.approx(r["closed_form"], rel=0.05)
        assert (r["n_trials"], r["seed"]) == (100000, 42)

    @pytest.mark.xfail(strict=True, reason="hardening gap exceeds 5% at the soc-optimal power")
    def test_soc_close_to_closed_form_at_optimal_power(self, capsys):
        _, out, _ = run(capsys, "simulate", DEFAULT, "--target", "soc", "--trials", "100000",
                        "--seed", "42", "--json")
        r = json.loads(out)
        assert r["value"] == pytest.approx(r["closed_form"], rel=0.05)

    def test_ip_and_outage_targets(self, capsys, scenario):
        path = scenario(alpha_re=30.0)
        code, out, _ = run(capsys, "simulate", path, "--target", "ip", "--strategy", "fixed",
                           "--p-r-db", "7", "--trials", "20000", "--seed", "1", "--json")
        r = json.loads(out)
        assert code == 0
        assert r["closed_form"] == pytest.approx(an.interception_probability_cf(
            SystemParams(alpha_re=30.0), 10 ** 0.7))
        assert r["value"] == pytest.approx(r["closed_form"], rel=0.15)
        code, out, _ = run(capsys, "simulate", DEFAULT, "--target", "outage", "--trials", "20000",
                           "--seed", "1", "--json")
        r = json.loads(out)
        assert code == 0 and r["closed_form"] == 0.01 and 0 < r["value"] < 0.05

    def test_too_few_trials(self, capsys):
        code, _, err = run(capsys, "simulate", DEFAULT, "--trials", "10")
        assert code == 2
        assert "tail samples" in err

    def test_bad_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", DEFAULT, "--target", "nope"])
        assert exc.value.code == 2

    def test_rerun_identical_across_workers(self):
        args = ("simulate", DEFAULT, "--target", "soc", "--trials", "20000", "--seed", "5")
        a = run_proc(*args, workers=1)
        b = run_proc(*args, workers=3)
        assert a.returncode == 0, a.stderr
        assert a.stdout == b.stdout


class TestSweep:
    def test_fig2_schema(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "2", DEFAULT, "--out", str(tmp_path),
                         "--trials", "10000", "--seed", "3")
        assert code == 0
        with open(tmp_path / "fig2.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["alpha_re", "epsilon", "c_soc_theory", "c_soc_mc", "c_soc_mc_stderr"]
        assert len(rows) == 1 + 25 * 3
        meta = json.loads((tmp_path / "fig2.meta.json").read_text())
        assert meta["seed"] == 3

    def test_fig5_saturates(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "5", DEFAULT, "--out", str(tmp_path), "--no-mc")
        assert code == 0
        with open(tmp_path / "fig5.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        limit = an.soc_saturation_limit(SystemParams())
        assert float(rows[-1]["c_soc_theory"]) == pytest.approx(limit, rel=1e-9)
        assert rows[-1]["c_soc_mc"] == ""

    def test_series(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "6", DEFAULT, "--out", str(tmp_path), "--no-mc",
                         "--series-alpha-re", "2,5,10")
        assert code == 0
        with open(tmp_path / "fig6.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert sorted({r["alpha_re"] for r in rows}) == ["10.0", "2.0", "5.0"]

    def test_io_failure(self, capsys, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code, _, err = run(capsys, "sweep", "3", DEFAULT, "--out", str(blocker), "--no-mc")
        assert code == 4

    def test_rerun_byte_identical_across_workers(self, tmp_path):
        outs = []
        for i, workers in enumerate((1, 2)):
            out = tmp_path / f"run{i}"
            proc = run_proc("sweep", "3", DEFAULT, "--out", str(out), "--trials", "12000",
                            "--seed", "11", workers=workers)
            assert proc.returncode == 0, proc.stderr
            outs.append(((out / "fig3.csv").read_bytes(), (out / "fig3.meta.json").read_bytes()))
        assert outs[0] == outs[1]
