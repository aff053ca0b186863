import json

import pytest

from forkbench.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestProfit:
    def test_honest(self, capsys):
        code, out, _ = run(capsys, "profit", "--strategy", "honest", "--alpha-a", "0.2")
        assert code == 0
        assert "share attacker  0.200000" in out

    def test_psm_json_round_trip(self, capsys):
        code, out, _ = run(
            capsys,
            "profit", "--strategy", "psm", "--alpha-a", "0.2",
            "--alpha-i", "0.1", "--gamma", "1", "--format", "json",
        )
        assert code == 0
        record = json.loads(out)
        assert record["command"] == "profit"
        assert record["params"] == {
            "strategy": "psm", "alpha_a": 0.2, "alpha_i": 0.1, "gamma": 1.0,
        }
        assert record["results"]["rer_vs_honest"] == pytest.approx(0.1167, abs=1e-4)

    def test_apsm_power_cap_exit_2(self, capsys):
        code, _, err = run(
            capsys, "profit", "--strategy", "apsm", "--alpha-a", "0.3", "--alpha-i", "0.3"
        )
        assert code == 2
        assert "0.5" in err

    def test_csv_format(self, capsys):
        code, out, _ = run(
            capsys, "profit", "--strategy", "honest", "--alpha-a", "0.2", "--format", "csv"
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert "results.share_attacker" in header
        assert len(header.split(",")) == len(row.split(","))


class TestSimulate:
    ARGS = (
        "simulate", "--strategy", "psm", "--alpha-a", "0.2", "--alpha-i", "0.1",
        "--gamma", "0", "--rounds", "200000", "--seed", "7", "--format", "json",
    )

    def test_deterministic_across_workers(self, capsys):
        _, out1, _ = run(capsys, *self.ARGS, "--workers", "1")
        _, out2, _ = run(capsys, *self.ARGS, "--workers", "8")
        assert out1 == out2

    def test_share_near_analytic(self, capsys):
        from forkbench import analytic
        from forkbench.model import PowerSplit

        code, out, _ = run(capsys, *self.ARGS)
        assert code == 0
        record = json.loads(out)
        expected = analytic.psm_profits(PowerSplit.from_attack(0.2, 0.1), 0.0)
        assert record["results"]["share_attacker"] == pytest.approx(
            expected.share_attacker, abs=0.01
        )
        assert record["seed"] == 7
        assert "workers" not in json.dumps(record)

    def test_zero_rounds_exit_2(self, capsys):
        code, _, err = run(
            capsys, "simulate", "--strategy", "psm", "--alpha-a", "0.2",
            "--rounds", "0", "--seed", "1",
        )
        assert code == 2
        assert "rounds" in err

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("FORKBENCH_SEED", "123")
        _, out, _ = run(
            capsys, "simulate", "--strategy", "honest", "--alpha-a", "0.2",
            "--rounds", "100000", "--format", "json",
        )
        assert json.loads(out)["seed"] == 123

    def test_seed_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FORKBENCH_SEED", "123")
        _, out, _ = run(
            capsys, "simulate", "--strategy", "honest", "--alpha-a", "0.2",
            "--rounds", "100000", "--seed", "9", "--format", "json",
        )
        assert json.loads(out)["seed"] == 9


class TestConfigFile:
    def test_config_supplies_defaults_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha-a = 0.2\ngamma = 1\nalpha-i = 0.1\n")
        code, out, _ = run(
            capsys, "profit", "--strategy", "psm", "--config", str(cfg),
            "--gamma", "0", "--format", "json",
        )
        assert code == 0
        params = json.loads(out)["params"]
        assert params["alpha_a"] == 0.2  # from config
        assert params["gamma"] == 0.0  # flag wins

    def test_unknown_config_key_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n")
        code, _, err = run(
            capsys, "profit", "--strategy", "honest", "--alpha-a", "0.2",
            "--config", str(cfg),
        )
        assert code == 2
        assert "bogus" in err


class TestTables:
    def test_emits_csv_and_figure(self, capsys, tmp_path):
        out_csv = tmp_path / "t2.csv"
        code, out, _ = run(
            capsys, "tables", "--table", "2", "--rounds", "200000",
            "--seed", "1", "--out", str(out_csv),
        )
        assert code == 0
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0] == "gamma,alpha_param,simulated,analytic,abs_diff"
        assert len(lines) == 21
        assert (tmp_path / "t2.png").exists()

    def test_unknown_table_exit_2(self, capsys, tmp_path):
        code, _, _ = run(
            capsys, "tables", "--table", "9", "--rounds", "1000",
            "--seed", "1", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2

    def test_analytic_column_matches_grid(self, capsys, tmp_path):
        out_csv = tmp_path / "t3.csv"
        run(
            capsys, "tables", "--table", "3", "--rounds", "100000",
            "--seed", "1", "--out", str(out_csv),
        )
        rows = [l.split(",") for l in out_csv.read_text().strip().split("\n")[1:]]
        cell = next(r for r in rows if float(r[0]) == 0.0 and abs(float(r[1]) - 0.1) < 1e-9)
        assert float(cell[3]) == pytest.approx(8.05, abs=0.01)


class TestSweep:
    def test_verdict_mode(self, capsys, tmp_path):
        out_csv = tmp_path / "sweep.csv"
        code, _, _ = run(
            capsys, "sweep", "--mode", "verdict", "--alpha-a-range", "0.30:0.37",
            "--gamma-range", "0:0", "--step", "0.005", "--out", str(out_csv),
        )
        assert code == 0
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0] == "alpha_a,gamma,alpha_i,r_honest,r_selfish,r_psm,r_apsm,best"
        bests = [l.split(",")[-1] for l in lines[1:]]
        assert "honest" in bests and "selfish" in bests
        assert (tmp_path / "sweep.png").exists()

    def test_min_alpha_i_mode(self, capsys, tmp_path):
        out_csv = tmp_path / "mi.csv"
        code, _, _ = run(
            capsys, "sweep", "--mode", "min-alpha-i", "--alpha-a-range", "0.01:0.01",
            "--gamma-range", "0:0", "--step", "0.01", "--out", str(out_csv),
        )
        assert code == 0
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0] == "alpha_a,gamma,min_alpha_i"
        assert float(lines[1].split(",")[2]) == pytest.approx(0.49, abs=0.01)

    def test_empty_range_exit_2(self, capsys, tmp_path):
        code, _, _ = run(
            capsys, "sweep", "--alpha-a-range", "0.4:0.3", "--gamma-range", "0:0",
            "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2


class TestMiner:
    def test_table_cell(self, capsys):
        code, out, _ = run(
            capsys, "miner", "--alpha-a", "0.2", "--alpha-k", "0.2",
            "--gamma", "0.5", "--format", "json",
        )
        assert code == 0
        record = json.loads(out)
        assert record["results"]["verdict"] == "greedy"
        assert record["results"]["rer_greedy_vs_public"] > 0

    def test_threshold_miner_has_zero_rer(self, capsys):
        from forkbench import analytic

        k = analytic.join_threshold(0.3, 0.2)
        code, out, _ = run(
            capsys, "miner", "--alpha-a", "0.3", "--alpha-k", f"{k:.17g}",
            "--gamma", "0.2", "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["results"]["rer_greedy_vs_public"] == pytest.approx(
            0.0, abs=1e-9
        )


class TestEcon:
    def test_find_prob(self, capsys):
        code, out, _ = run(
            capsys, "econ", "find-prob", "--t", "600", "--alpha-e", "1",
            "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["results"]["probability"] == pytest.approx(0.64)

    def test_dos(self, capsys):
        code, out, _ = run(
            capsys, "econ", "dos", "--n", "100", "--tc", "600", "--alpha-a", "0.2",
            "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["results"]["viable"] == "False" or not json.loads(out)[
            "results"
        ]["viable"]

    def test_invalid_fraction_exit_2(self, capsys):
        code, _, _ = run(
            capsys, "econ", "search-time", "--bytes", "8", "--fraction", "0",
        )
        assert code == 2


class TestReport:
    def test_small_report(self, capsys, tmp_path):
        out_csv = tmp_path / "report.csv"
        code, out, _ = run(
            capsys, "report", "--rounds", "100000", "--seed", "2",
            "--points", "10", "--tables", "2", "--out", str(out_csv),
        )
        # the quoted benchmark headline check fails by design
        assert code == 1
        assert out_csv.exists()
        assert (tmp_path / "report.png").exists()
        text = out_csv.read_text()
        assert "headline-psm-benchmark-quoted-point" in text
        assert "# summary:" in text
