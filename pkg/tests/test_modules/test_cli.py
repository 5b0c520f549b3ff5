"""CLI tests through click's runner.

Commands tested: run, suite, validate, analyze (qcn-tau, sliding-check,
eigen, classify, advise, fluid-sim, delay-bounds, h0)
"""
import csv
import io

import pytest
from click.testing import CliRunner

from qausim.cli.common import exit_code_for
from qausim.cli.main import cli
from qausim.core.receipt import StopRule
from qausim.topology import ConfigError

# b- caps far below the defaults: the minus inequality fails
FAILING_CAPS = "1/8,1/64,1/16,1/100000,1/16,1/128,1/32,1/100000"


@pytest.fixture
def runner():
    return CliRunner()


def csv_rows(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


class TestAnalyze:
    """analyze subcommands print CSV."""

    def test_qcn_tau(self, runner):
        result = runner.invoke(cli, ["analyze", "qcn-tau", "--capacity", "10e9",
                                     "--capacity", "100e9"])
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.stdout)
        assert [float(r["capacity_bps"]) for r in rows] == [10e9, 100e9]
        assert float(rows[0]["tau_min_us"]) == pytest.approx(271, rel=0.15)
        assert float(rows[1]["tau_min_us"]) == pytest.approx(27, rel=0.15)

    def test_qcn_tau_source_count(self, runner):
        result = runner.invoke(cli, ["analyze", "qcn-tau", "--help"])
        assert result.exit_code == 0, result.output
        assert "N=1)" in result.output and "N=10" in result.output, result.output
        one = csv_rows(runner.invoke(cli, ["analyze", "qcn-tau"]).stdout)
        ten = csv_rows(runner.invoke(cli, ["analyze", "qcn-tau", "--n", "10"]).stdout)
        ratio = float(ten[0]["tau_min_us"]) / float(one[0]["tau_min_us"])
        assert ratio == pytest.approx(10.0, rel=0.05), f"N=10 / N=1 ratio {ratio}"

    def test_sliding_check_defaults(self, runner):
        result = runner.invoke(cli, ["analyze", "sliding-check"])
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.stdout)
        assert [r["regime"] for r in rows] == ["approach", "sliding"]
        assert all(r["holds"] == "true" for r in rows)

    def test_sliding_check_fails(self, runner):
        result = runner.invoke(cli, ["analyze", "sliding-check", "--caps", FAILING_CAPS])
        assert result.exit_code == 1

    def test_sliding_check_from_scenario(self, runner):
        result = runner.invoke(cli, ["analyze", "sliding-check", "--scenario", "dumbbell3"])
        assert result.exit_code == 0, result.output

    def test_bad_caps(self, runner):
        result = runner.invoke(cli, ["analyze", "sliding-check", "--caps", "a,b"])
        assert result.exit_code == 2

    def test_eigen(self, runner):
        result = runner.invoke(cli, ["analyze", "eigen"])
        assert result.exit_code == 0, result.output
        rows = {r["branch"]: r for r in csv_rows(result.stdout)}
        assert rows["plus"]["shape"] == "spiral"
        assert rows["minus"]["shape"] == "real"

    def test_classify_refused(self, runner):
        result = runner.invoke(cli, ["analyze", "classify", "--region-sign=-1",
                                     "--caps", FAILING_CAPS])
        assert result.exit_code == 1

    def test_classify_spiral(self, runner):
        result = runner.invoke(cli, ["analyze", "classify", "--region-sign=-1"])
        assert result.exit_code == 0, result.output
        assert csv_rows(result.stdout)[0]["shape"] == "spiral"

    def test_advise(self, runner):
        result = runner.invoke(cli, ["analyze", "advise", "--tau", "1e-5"])
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.stdout)
        assert [r["regime"] for r in rows] == ["approach", "sliding"]

    def test_fluid_sim_to_file(self, runner, tmp_path):
        out = tmp_path / "traj.csv"
        result = runner.invoke(cli, ["analyze", "fluid-sim", "--t-end", "0.01",
                                     "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = csv_rows(out.read_text())
        assert float(rows[0]["q_pkts"]) == pytest.approx(114.0)
        assert rows[0]["x1_pkts"] == "50.0"

    def test_fluid_sim_bad_x0(self, runner):
        result = runner.invoke(cli, ["analyze", "fluid-sim", "--x0", "nope"])
        assert result.exit_code == 2

    def test_delay_bounds(self, runner):
        result = runner.invoke(cli, ["analyze", "delay-bounds", "--tau", "1e-5",
                                     "--tau", "1e-4"])
        assert result.exit_code == 0, result.output
        assert len(csv_rows(result.stdout)) == 2

    def test_h0(self, runner):
        result = runner.invoke(cli, ["analyze", "h0", "--tau", "1e-5"])
        assert result.exit_code == 0, result.output
        assert float(csv_rows(result.stdout)[0]["D_pkts"]) >= 0


class TestValidate:
    """validate exit codes."""

    def test_shipped(self, runner):
        result = runner.invoke(cli, ["validate", "dumbbell3"])
        assert result.exit_code == 0, result.output
        assert "sw1->d1" in result.stdout

    def test_sliding_failure(self, runner):
        result = runner.invoke(cli, ["validate", "dumbbell3", "--override", "asm.b_minus_A=1"])
        assert result.exit_code == 1

    def test_missing_scenario(self, runner, tmp_path):
        result = runner.invoke(cli, ["validate", str(tmp_path / "nope.cfg")])
        assert result.exit_code == 2

    def test_no_argument(self, runner):
        result = runner.invoke(cli, ["validate"])
        assert result.exit_code == 2


class TestRun:
    """run writes its artifacts."""

    def test_short_run(self, runner, tmp_path):
        out = tmp_path / "run"
        result = runner.invoke(cli, ["run", "dumbbell3", "--out", str(out),
                                     "--override", "scenario.duration_ns=2000000"])
        assert result.exit_code == 0, result.output
        for name in ("trace.csv", "metrics.txt", "scenario.cfg", "receipts.jsonl"):
            assert (out / name).exists(), f"missing {name}"

    def test_invalid_path(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", str(tmp_path / "missing.cfg"),
                                     "--out", str(tmp_path / "o")])
        assert result.exit_code == 2

    def test_invalid_override(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "dumbbell3", "--out", str(tmp_path / "o"),
                                     "--override", "link.l0.capacity_bps=0"])
        assert result.exit_code == 2

    def test_no_scenario(self, runner):
        assert runner.invoke(cli, ["run"]).exit_code == 2


class TestSuite:
    """suite end to end on one short point."""

    def test_sliding(self, runner, tmp_path):
        result = runner.invoke(cli, ["suite", "sliding", "--out", str(tmp_path),
                                     "--override", "scenario.duration_ns=1000000"])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "aggregate.csv").exists()

    def test_unknown(self, runner):
        assert runner.invoke(cli, ["suite", "nope"]).exit_code == 2


class TestExitCodes:
    """Exceptions map to 2 (bad input), 3 (halted run) or 4 (unexpected)."""

    def test_mapping(self):
        assert exit_code_for(ConfigError("bad key")) == 2
        assert exit_code_for(ValueError("cap must be positive")) == 2
        assert exit_code_for(StopRule("clock ran backwards")) == 3
        assert exit_code_for(RuntimeError("boom")) == 4
        assert exit_code_for(KeyError("x")) == 4

    def test_run_halted(self, runner, tmp_path, monkeypatch):
        def halt(*args, **kwargs):
            raise StopRule("trace time does not advance")

        monkeypatch.setattr("qausim.network.run_scenario", halt)
        result = runner.invoke(cli, ["run", "dumbbell3", "--out", str(tmp_path / "o")])
        assert result.exit_code == 3, result.output

    def test_unexpected_error_is_not_a_config_error(self, runner, tmp_path, monkeypatch):
        def crash(*args, **kwargs):
            raise RuntimeError("unexpected")

        monkeypatch.setattr("qausim.network.run_scenario", crash)
        result = runner.invoke(cli, ["run", "dumbbell3", "--out", str(tmp_path / "o")])
        assert result.exit_code == 4, result.output
