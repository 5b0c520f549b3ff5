"""Unit tests for the congestion point.

Functions tested: compute_fb, quantize, dequantize, quantize_fb_magnitude, qf_scale_for,
encode_frame, decode_frame, SwitchPort.enqueue, maybe_sample
"""
import math

import numpy as np
import pytest

from qausim.cp import (
    AsmFeedback,
    CpMode,
    EnqueueResult,
    FeedbackFrame,
    MalformedFrame,
    Packet,
    QcnFeedback,
    SwitchPort,
    decode_frame,
    encode_frame,
)
from qausim.cp.feedback import (
    compute_fb,
    dequantize,
    qcn_fb_scale_for,
    qf_scale_for,
    quantize,
    quantize_fb_magnitude,
)
from qausim.engine import EventKind, RngStream, Simulator

PKT = 1500


def make_port(mode=CpMode.ASM, p=1.0, buffer_bytes=131072, q0=64, w=32.0, sim=None,
              on_departure=None, dedup=True, seed=1):
    return SwitchPort(cpid=1, capacity_bps=1e9, buffer_bytes=buffer_bytes, q0_packets=q0,
                      w=w, p=p, mode=mode, rng=RngStream(seed, "cp.test"), packet_size=PKT,
                      sim=sim, on_departure=on_departure, dedup=dedup)


def pkt(src=0):
    return Packet(flow_id=src, src=src, dst=src, size=PKT)


class TestComputeFb:
    """F_b = -Q_f - w*dQ."""

    def test_stable_point(self):
        assert compute_fb(0, 0, 32) == 0

    def test_congested(self):
        assert compute_fb(10, 2, 32) == -74

    def test_draining(self):
        assert compute_fb(-64, 1, 32) == 32


class TestQuantize:
    """Signed 8-bit codes."""

    def test_zero(self):
        assert quantize(0, 1.0) == 0

    def test_saturates_high(self):
        assert quantize(1e6, 1.0) == 127

    def test_saturates_low(self):
        assert quantize(-1e6, 1.0) == -128

    def test_rounds_half_up(self):
        assert quantize(2.5, 1.0) == 3
        assert quantize(-2.5, 1.0) == -2

    def test_scale_divides(self):
        assert quantize(12, 6.0) == 2

    def test_nonpositive_scale_raises(self):
        with pytest.raises(ValueError):
            quantize(1, 0.0)

    def test_fb_magnitude_never_zero(self):
        """A congested sample always carries at least code 1."""
        assert quantize_fb_magnitude(-0.1, 1.0) == 1
        assert quantize_fb_magnitude(-1e6, 1.0) == 63

    def test_scale_for_default_buffer(self):
        """128 KiB of 1500 B packets fits the code range at one packet per code."""
        assert qf_scale_for(131072, PKT) == 1.0

    def test_scale_for_large_buffer(self):
        """1 MiB holds ~699 packets: ceil(699/127) = 6."""
        assert qf_scale_for(1 << 20, PKT) == 6.0

    def test_qcn_scale(self):
        assert qcn_fb_scale_for(64, 2) == pytest.approx(64 * 5 / 63)
        assert qcn_fb_scale_for(5, 2) == 1.0


class TestQuantizeSweep:
    """Round-trip error and saturation across the whole code range."""

    SCALES = (0.5, 1.0, 3.0, 6.0)

    @pytest.mark.parametrize("scale", SCALES)
    def test_round_trip_error_within_half_scale(self, scale):
        for value in np.linspace(-128 * scale, 127 * scale, 4001):
            code = quantize(value, scale)
            err = abs(dequantize(code, scale) - value)
            assert err <= scale / 2 + 1e-9, f"value {value}: code {code}, error {err}"

    @pytest.mark.parametrize("scale", SCALES)
    def test_every_code_is_a_fixed_point(self, scale):
        for code in range(-128, 128):
            assert quantize(dequantize(code, scale), scale) == code

    @pytest.mark.parametrize("scale", SCALES)
    def test_saturates_at_both_limits(self, scale):
        for value in np.linspace(127.5 * scale, 1e4 * scale, 101):
            assert quantize(value, scale) == 127, f"value {value}"
        for value in np.linspace(-1e4 * scale, -128.5 * scale, 101):
            assert quantize(value, scale) == -128, f"value {value}"


class TestWireFormat:
    """Frame encode/decode and rejection of bad bytes."""

    def test_asm_frame_survives_the_wire(self):
        frame = FeedbackFrame(7, 3, AsmFeedback(-128, 127))
        assert decode_frame(encode_frame(frame)) == frame

    def test_qcn_frame_survives_the_wire(self):
        frame = FeedbackFrame(2, 9, QcnFeedback(63))
        assert decode_frame(encode_frame(frame)) == frame

    def test_wrong_length(self):
        with pytest.raises(MalformedFrame):
            decode_frame(b"\x00" * 5)

    def test_unknown_type(self):
        data = bytearray(encode_frame(FeedbackFrame(1, 1, AsmFeedback(0, 0))))
        data[8] = 7
        with pytest.raises(MalformedFrame):
            decode_frame(bytes(data))

    def test_qcn_zero_magnitude_rejected(self):
        data = bytearray(encode_frame(FeedbackFrame(1, 1, QcnFeedback(5))))
        data[9] = 0
        with pytest.raises(MalformedFrame):
            decode_frame(bytes(data))

    def test_frame_type(self):
        assert FeedbackFrame(1, 1, AsmFeedback(0, 0)).frame_type.name == "ASM"
        assert FeedbackFrame(1, 1, QcnFeedback(1)).frame_type.name == "QCN"


class TestEnqueue:
    """Tail-drop FIFO accounting."""

    def test_empty_queue_accepts(self):
        port = make_port()
        assert port.enqueue(pkt()) is EnqueueResult.ACCEPTED
        assert port.q == PKT, f"q={port.q}"

    def test_full_queue_drops(self):
        port = make_port(buffer_bytes=2 * PKT, q0=1)
        port.enqueue(pkt())
        port.enqueue(pkt())
        assert port.q == port.buffer_bytes
        assert port.enqueue(pkt()) is EnqueueResult.DROPPED
        assert port.drop_count == 1 and port.dropped_bytes == PKT

    def test_default_buffer_holds_87_packets(self):
        port = make_port()
        results = [port.enqueue(pkt()) for _ in range(90)]
        accepted = sum(r is EnqueueResult.ACCEPTED for r in results)
        assert accepted == 87, f"accepted {accepted}"
        assert port.conservation_holds()

    def test_departures_at_line_rate(self):
        """1500 B at 1 Gbps leave every 12 us."""
        sim = Simulator()
        times = []
        port = make_port(sim=sim, on_departure=lambda p: times.append(sim.now_ns))
        port.enqueue(pkt())
        port.enqueue(pkt())
        sim.run_until_ns(1_000_000)
        assert times == [12_000, 24_000], f"departures at {times}"
        assert port.q == 0 and port.conservation_holds()
        assert port.departed_bytes == 2 * PKT

    def test_overload_fills_then_drops(self):
        """1.5 Gbps offered into 1 Gbps grows q at 0.5 Gbps until the buffer fills."""
        sim = Simulator()
        port = make_port(sim=sim)
        gap = 8_000  # 1500 B every 8 us is 1.5 Gbps

        def arrive(e):
            port.enqueue(pkt())
            sim.after(gap, e.kind, arrive)

        sim.at(0, EventKind.PACKET_ARRIVAL, arrive)
        sim.run_until_ns(1_000_000)
        # after 1 ms: 0.5 Gbps * 1 ms = 62.5 kB of backlog
        assert port.q_packets == pytest.approx(41.7, abs=2), f"q={port.q_packets} pkts"
        assert port.drop_count == 0
        sim.run_until_ns(4_000_000)
        assert port.drop_count > 0, "buffer never overflowed"
        assert port.conservation_holds()


class TestSampling:
    """Bernoulli sampling and frame contents."""

    def test_stable_point_gives_zero_codes(self):
        port = make_port(q0=2)
        port.enqueue(pkt())
        port.enqueue(pkt())
        port.maybe_sample(pkt(src=0))
        frame = port.maybe_sample(pkt(src=1))
        assert frame is not None
        assert frame.payload == AsmFeedback(0, 0), f"payload {frame.payload}"
        assert frame.dst == 1 and frame.cpid == 1

    def test_same_source_suppressed(self):
        """Back-to-back samples for one source: second suppressed, state untouched."""
        port = make_port(q0=2)
        port.enqueue(pkt())
        assert port.maybe_sample(pkt(src=4)) is not None
        port.enqueue(pkt())
        last = port.q_last_sample
        assert port.maybe_sample(pkt(src=4)) is None
        assert port.frames_suppressed == 1
        assert port.q_last_sample == last, "suppressed sample moved q_last_sample"

    def test_dedup_off(self):
        port = make_port(dedup=False)
        assert port.maybe_sample(pkt(src=4)) is not None
        assert port.maybe_sample(pkt(src=4)) is not None

    def test_one_draw_per_arrival(self):
        port = make_port(p=0.3)
        for i in range(200):
            port.maybe_sample(pkt(src=i % 3))
        assert port.rng.draws == 200

    def test_first_sample_codes(self):
        """q = 10 packets, q0 = 2, dq from zero: Q_f=8, dQ code 20 at half scale."""
        port = make_port(q0=2)
        for _ in range(10):
            port.enqueue(pkt())
        frame = port.maybe_sample(pkt())
        assert frame.payload == AsmFeedback(8, 20), f"payload {frame.payload}"

    def test_qcn_only_when_congested(self):
        port = make_port(mode=CpMode.QCN, q0=2, w=2.0)
        assert port.maybe_sample(pkt(src=0)) is None, "empty queue produced QCN feedback"
        for _ in range(10):
            port.enqueue(pkt())
        frame = port.maybe_sample(pkt(src=1))
        # fb = -8 - 2*10 = -28 at one packet per code
        assert frame.payload == QcnFeedback(28), f"payload {frame.payload}"

    def test_binomial_frame_count(self):
        """p = 0.01 over 10^6 arrivals: within 3 sigma of 10^4."""
        port = make_port(p=0.01, dedup=False, seed=11)
        n = 1_000_000
        for _ in range(n):
            port.maybe_sample(pkt())
        sigma = math.sqrt(n * 0.01 * 0.99)
        assert abs(port.frames_emitted - 10_000) <= 3 * sigma, \
            f"{port.frames_emitted} frames, expected 10000 +/- {3 * sigma:.0f}"
