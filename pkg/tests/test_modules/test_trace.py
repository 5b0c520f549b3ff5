"""Unit tests for trace capture and metrics.

Functions tested: TraceRecorder.sample, Trace.to_csv, settle_index,
count_drains, metrics_from_series, compute_metrics, MetricsReport
"""
import csv
import io
import math
from types import SimpleNamespace

import numpy as np
import pytest

from qausim.core.receipt import StopRule
from qausim.trace import (
    MetricsReport,
    TraceRecorder,
    compute_metrics,
    count_drains,
    metrics_from_series,
    settle_index,
)


def port(name, q_bytes, departed=0, drops=0):
    return SimpleNamespace(name=name, q=q_bytes, packet_size=1500,
                           departed_bytes=departed, drop_count=drops)


def flow(rate, active=True):
    return SimpleNamespace(rate_bps=rate, active=active)


class TestRecorder:
    """Snapshots and the CSV layout."""

    def test_columns(self):
        rec = TraceRecorder(["sw1->d1", "sw1->s1"], ["f1", "f2"], 0, 64, 1e9)
        assert rec.trace.columns == [
            "t_s", "A_bps", "tx_bytes", "drops", "slope_k_bps_per_pkt",
            "q_sw1_d1_pkts", "q_sw1_s1_pkts", "rate_f1_bps", "rate_f2_bps",
        ]

    def test_row_values(self):
        rec = TraceRecorder(["sw1->d1"], ["f1", "f2"], 0, 64, 1e9)
        row = rec.sample(100_000, [port("sw1->d1", 3000, departed=4500, drops=2)],
                         [flow(5e8), flow(3e8, active=False)])
        assert row.port_q == (2.0,)
        assert row.flow_rates == (5e8, 0.0)
        assert row.agg_rate_bps == 5e8
        assert (row.tx_bytes, row.drops) == (4500, 2)
        assert row.slope_k is None

    def test_slope(self):
        rec = TraceRecorder(["b"], ["f1"], 0, 64, 1e9)
        rec.sample(1, [port("b", 1500)], [flow(1e9)])
        row = rec.sample(2, [port("b", 4500)], [flow(8e8)])
        assert row.slope_k == pytest.approx(-1e8), f"slope {row.slope_k}"

    def test_blank_slope_when_queue_flat(self):
        rec = TraceRecorder(["b"], ["f1"], 0, 64, 1e9)
        rec.sample(1, [port("b", 1500)], [flow(1e9)])
        assert rec.sample(2, [port("b", 1500)], [flow(8e8)]).slope_k is None

    def test_time_must_advance(self):
        rec = TraceRecorder(["b"], ["f1"], 0, 64, 1e9)
        rec.sample(10, [port("b", 0)], [flow(1e9)])
        with pytest.raises(StopRule):
            rec.sample(10, [port("b", 0)], [flow(1e9)])

    def test_csv(self):
        rec = TraceRecorder(["b"], ["f1"], 0, 64, 1e9)
        rec.sample(100_000, [port("b", 0)], [flow(1e9)])
        rec.sample(200_000, [port("b", 1500)], [flow(5e8)])
        rows = list(csv.reader(io.StringIO(rec.trace.to_csv())))
        assert rows[0][0] == "t_s" and len(rows) == 3
        assert rows[1][0] == "0.000100000"
        assert rows[1][4] == "", "first row has no slope"
        assert float(rows[2][4]) == pytest.approx(-5e8)
        assert float(rows[2][5]) == 1.0

    def test_write_csv(self, tmp_path):
        rec = TraceRecorder(["b"], ["f1"], 0, 64, 1e9)
        rec.sample(1, [port("b", 0)], [flow(1e9)])
        path = rec.trace.write_csv(tmp_path / "trace.csv")
        assert path.read_text().startswith("t_s,A_bps")


class TestSettle:
    """Settle index and drains."""

    def test_always_in_band(self):
        assert settle_index(np.full(10, 64.0), 64, 6.4) == 0

    def test_never_settled(self):
        q = np.array([64.0, 64.0, 100.0])
        assert settle_index(q, 64, 6.4) is None

    def test_final_run(self):
        q = np.array([64.0, 100.0, 66.0, 62.0])
        assert settle_index(q, 64, 6.4) == 2

    def test_count_drains(self):
        assert count_drains(np.array([0, 0, 3, 0, 5, 0, 0])) == 3
        assert count_drains(np.array([1, 2, 3])) == 0
        assert count_drains(np.zeros(4)) == 1


class TestMetrics:
    """metrics_from_series on synthetic series."""

    def test_constant_at_q0(self):
        t = np.linspace(0, 0.1, 101)
        m = metrics_from_series(t, np.full_like(t, 64.0), 64, 6.4)
        assert m.response_time_s == 0.0
        assert m.max_amplitude_pkts == 0.0
        assert m.avg_q_pkts == 64.0
        assert m.drain_count == 0

    def test_never_settles(self):
        t = np.linspace(0, 0.1, 101)
        q = 64 + 30 * np.sin(2 * np.pi * 50 * t) + 20
        m = metrics_from_series(t, q, 64, 6.4)
        assert math.isinf(m.response_time_s)

    def test_exponential_decay(self):
        """Offset 50 decaying with time constant T settles after T*ln(50/5)."""
        tc = 0.01
        t = np.arange(0, 0.2, 1e-5)
        q = 64 + 50 * np.exp(-t / tc)
        m = metrics_from_series(t, q, 64, 5.0)
        expected = tc * math.log(10)
        assert m.response_time_s == pytest.approx(expected, abs=2e-5), \
            f"response {m.response_time_s:.6f}s, expected {expected:.6f}s"
        assert m.max_amplitude_pkts <= 5.0

    def test_throughput_full(self):
        t = np.linspace(0, 0.1, 11)
        tx = (t * 1e9 / 8).astype(np.int64)
        m = metrics_from_series(t, np.full_like(t, 64.0), 64, 6.4, tx_bytes=tx,
                                capacity_bps=1e9)
        assert m.throughput_ratio == pytest.approx(1.0, rel=1e-6)

    def test_throughput_missing(self):
        t = np.linspace(0, 0.1, 11)
        m = metrics_from_series(t, np.full_like(t, 64.0), 64, 6.4)
        assert math.isnan(m.throughput_ratio)

    def test_warmup_fixes_start(self):
        t = np.linspace(0, 1, 11)
        q = np.array([0, 0, 0, 0, 0, 64, 64, 64, 64, 64, 64], dtype=float)
        settled = metrics_from_series(t, q, 64, 6.4)
        warm = metrics_from_series(t, q, 64, 6.4, warmup_s=0.2)
        assert settled.drain_count == 0
        assert warm.drain_count == 1
        assert warm.response_time_s == pytest.approx(0.5)

    def test_drops_counted_over_window(self):
        t = np.linspace(0, 0.1, 3)
        m = metrics_from_series(t, np.full(3, 64.0), 64, 6.4, drops=np.array([2, 5, 9]))
        assert m.drop_count == 7

    def test_empty(self):
        with pytest.raises(ValueError):
            metrics_from_series(np.array([]), np.array([]), 64, 6.4)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            metrics_from_series(np.arange(3.0), np.arange(4.0), 64, 6.4)


class TestComputeMetrics:
    """Metrics over a recorded trace."""

    def make_trace(self):
        rec = TraceRecorder(["b"], ["f1"], 0, 64, 1e9)
        for k, q in enumerate([0, 30, 70, 64, 64, 63]):
            rec.sample((k + 1) * 100_000, [port("b", q * 1500, departed=k * 12_500)],
                       [flow(1e9)])
        return rec.trace

    def test_settled(self):
        m = compute_metrics(self.make_trace(), band=6.4)
        assert m.response_time_s == pytest.approx(2e-4)
        assert m.max_amplitude_pkts == pytest.approx(6.0)

    def test_window(self):
        m = compute_metrics(self.make_trace(), band=6.4, window=(0.0004, 0.0006))
        assert m.response_time_s == 0.0
        assert m.avg_q_pkts == pytest.approx((64 + 64 + 63) / 3)

    def test_empty_window(self):
        with pytest.raises(ValueError):
            compute_metrics(self.make_trace(), band=6.4, window=(1.0, 2.0))

    def test_receipt(self, receipts):
        compute_metrics(self.make_trace(), band=6.4, scenario="unit")
        got = [r for r in receipts() if r["receipt_type"] == "metrics"]
        assert len(got) == 1 and got[0]["scenario"] == "unit"


class TestReport:
    """Flat text form."""

    def test_text_reloads(self):
        report = MetricsReport(0.0123, 4.5, 63.9, 0, 0.97, 2)
        text = report.to_text()
        assert text.splitlines()[0] == "response_time_s=0.0123"
        assert "drain_count=0" in text
        assert MetricsReport.from_text(text) == report

    def test_infinite_response(self):
        report = MetricsReport(math.inf, 1.0, 1.0, 0, 1.0, 0)
        assert "response_time_s=inf" in report.to_text()
        assert math.isinf(MetricsReport.from_text(report.to_text()).response_time_s)
