"""Packet-level acceptance runs.

Pass criteria:
- 3x1 Gbps ASM dumbbell, q0=64: in band within 100 ms, no drains after, throughput >= 0.95
- 100 Gbps, 10 us links: QCN drains at least 5 times in 20 ms, ASM never; near-zero delay neither
- ASM amplitude at 100 Gbps <= 3x the 1 Gbps amplitude, throughput >= 0.95 everywhere
- Every compliant double/halve point keeps avg queue within [0.5x, 2x] of the default
- Re-running a suite with the same seed gives byte-identical traces
"""
import pytest

from qausim.core.receipt import dual_hash
from qausim.experiments import ExperimentSuite, run_suite
from qausim.network import Network, run_scenario
from qausim.topology import (
    Algorithm,
    build_parking_lot,
    bundled_scenario,
    load_scenario,
    with_link_delay,
)

DELAY_WARMUP_S = 0.005


@pytest.mark.slow
class TestDumbbellConvergence:
    """ASM on the shipped three-source dumbbell."""

    def test_converges_without_drains(self):
        """CONVERGENCE: band within 100 ms, nonempty buffer, full link."""
        result = run_scenario(load_scenario(bundled_scenario("dumbbell3")))
        m = result.metrics
        assert m.response_time_s <= 0.1, f"response {m.response_time_s:.4f} s"
        assert m.drain_count == 0, f"{m.drain_count} drains after convergence"
        assert m.throughput_ratio >= 0.95, f"throughput {m.throughput_ratio:.4f}"

    def test_small_queue_keeps_buffer(self):
        """CONVERGENCE: ten sources around a 5-packet target still never drain."""
        result = run_scenario(load_scenario(bundled_scenario("smallqueue")))
        assert result.metrics.drain_count == 0
        assert result.metrics.throughput_ratio >= 0.95


@pytest.mark.slow
class TestDelay:
    """QCN and ASM at 100 Gbps under link delay."""

    def run(self, algorithm: Algorithm, delay_ns: int):
        spec = load_scenario(bundled_scenario("highspeed"),
                             [f"scenario.algorithm={algorithm.value}"], check=False)
        return run_scenario(with_link_delay(spec, delay_ns), warmup_s=DELAY_WARMUP_S).metrics

    def test_long_delay(self):
        """DELAY: 60 us RTT empties the QCN buffer repeatedly, not the ASM one."""
        qcn = self.run(Algorithm.QCN, 10_000)
        asm = self.run(Algorithm.ASM, 10_000)
        assert qcn.drain_count >= 5, f"QCN drains {qcn.drain_count}"
        assert asm.drain_count == 0, f"ASM drains {asm.drain_count}"

    def test_short_delay(self):
        """DELAY: near-zero delay keeps both buffers nonempty."""
        for algorithm in Algorithm:
            m = self.run(algorithm, 100)
            assert m.drain_count == 0, f"{algorithm.value} drains {m.drain_count}"


@pytest.mark.slow
class TestBandwidth:
    """ASM amplitude across link speeds."""

    def test_amplitude_scales(self):
        """BANDWIDTH: 1 to 100 Gbps, amplitude within 3x, full link."""
        result = run_suite(ExperimentSuite("bandwidth-sweep"))
        for row in result.rows:
            assert row["throughput_ratio"] >= 0.95, f"{row['point']}: {row['throughput_ratio']}"
        amp_1g = result.row("1G")["max_amplitude_pkts"]
        amp_100g = result.row("100G")["max_amplitude_pkts"]
        assert amp_100g <= 3 * amp_1g, f"amplitude 1G {amp_1g}, 100G {amp_100g}"


@pytest.mark.slow
class TestParameterSweep:
    """Average queue under doubled and halved coefficients."""

    def test_avg_queue_stable(self):
        """PARAMS: compliant points stay within [0.5x, 2x] of the default."""
        result = run_suite(ExperimentSuite("param-sweep"), workers=4)
        assert len(result.rows) + len(result.excluded) == 81
        base = result.row("x1_x1_x1_x1")["avg_q_pkts"]
        for row in result.rows:
            ratio = row["avg_q_pkts"] / base
            assert 0.5 <= ratio <= 2.0, f"{row['point']}: avg_q {row['avg_q_pkts']} vs {base}"


@pytest.mark.slow
class TestParkingLot:
    """Five flows over a four-switch chain, compressed schedule."""

    def test_shared_links(self):
        """PARKING: every flow delivers and every port conserves bytes."""
        net = Network(build_parking_lot(time_scale=0.01))
        net.run()
        assert net.conservation_holds()
        for source in net.sources:
            assert source.sent_bytes > 0, f"{source.flow_id} never sent"
        assert net.delivered_bytes > 0


class TestDeterminism:
    """Identical seeds give identical bytes."""

    OVERRIDES = ("scenario.duration_ns=3000000",)

    def test_suite_rerun(self, tmp_path):
        """DETERMINISM: two runs of a suite write the same trace files."""
        suite = ExperimentSuite("small-queue", overrides=self.OVERRIDES, seed=11)
        run_suite(suite, tmp_path / "a")
        run_suite(suite, tmp_path / "b")
        for point in ("asm", "qcn"):
            a = (tmp_path / "a" / point / "trace.csv").read_bytes()
            b = (tmp_path / "b" / point / "trace.csv").read_bytes()
            assert dual_hash(a) == dual_hash(b), f"{point} traces differ"

    def test_seed_matters(self):
        """DETERMINISM: a different seed gives a different trace."""
        a = run_suite(ExperimentSuite("sliding", overrides=self.OVERRIDES, seed=1))
        b = run_suite(ExperimentSuite("sliding", overrides=self.OVERRIDES, seed=2))
        assert a.merkle_root != b.merkle_root
