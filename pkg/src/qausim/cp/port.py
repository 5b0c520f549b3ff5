"""Switch egress port acting as a congestion point.

A port is a FIFO byte queue served at `capacity_bps`. The queue length `q`
counts every accepted packet until its transmission completes. Each arriving
packet is offered to `maybe_sample` before `enqueue`.
"""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from qausim.config.features import FEATURE_SAMPLING_DEDUP_ENABLED
from qausim.core.constants import DQ_SCALE_RATIO, NS_PER_S
from qausim.engine import EventKind, RngStream, SimEvent, Simulator

from .feedback import (
    AsmFeedback,
    FeedbackFrame,
    QcnFeedback,
    compute_fb,
    qcn_fb_scale_for,
    qf_scale_for,
    quantize,
    quantize_fb_magnitude,
)

logger = logging.getLogger("qausim.cp")


class CpMode(Enum):
    ASM = "asm"
    QCN = "qcn"


class EnqueueResult(Enum):
    ACCEPTED = "accepted"
    DROPPED = "dropped"


@dataclass(slots=True)
class Packet:
    flow_id: int
    src: int
    dst: int
    size: int
    path: tuple[str, ...] = ()
    hop: int = 0
    sent_ns: int = 0


class SwitchPort:
    """CP state for one egress port."""

    def __init__(
        self,
        cpid: int,
        capacity_bps: float,
        buffer_bytes: int,
        q0_packets: float,
        w: float,
        p: float,
        mode: CpMode,
        rng: RngStream,
        packet_size: int,
        sim: Simulator | None = None,
        on_departure: Callable[[Packet], None] | None = None,
        name: str = "",
        dedup: bool = FEATURE_SAMPLING_DEDUP_ENABLED,
    ):
        if capacity_bps <= 0:
            raise ValueError(f"port capacity must be positive, got {capacity_bps}")
        self.cpid = cpid
        self.name = name or f"port{cpid}"
        self.capacity_bps = capacity_bps
        self.buffer_bytes = buffer_bytes
        self.q0_packets = q0_packets
        self.w = w
        self.p = p
        self.mode = mode
        self.rng = rng
        self.packet_size = packet_size
        self.sim = sim
        self.on_departure = on_departure
        self.dedup = dedup

        self.qf_scale = qf_scale_for(buffer_bytes, packet_size)
        self.dq_scale = self.qf_scale * DQ_SCALE_RATIO
        self.fb_scale = qcn_fb_scale_for(q0_packets, w)

        self.queue: deque[Packet] = deque()
        self.q = 0
        self.busy = False
        self.q_last_sample = 0
        self.last_feedback_dst: int | None = None
        self.last_frame: FeedbackFrame | None = None

        self.enqueued_bytes = 0
        self.departed_bytes = 0
        self.dropped_bytes = 0
        self.drop_count = 0
        self.samples = 0
        self.frames_emitted = 0
        self.frames_suppressed = 0
        self.busy_since_ns = 0
        self.busy_ns = 0

    @property
    def q_packets(self) -> float:
        return self.q / self.packet_size

    def tx_time_ns(self, size: int) -> int:
        return int(round(size * 8 * NS_PER_S / self.capacity_bps))

    def enqueue(self, pkt: Packet) -> EnqueueResult:
        """Tail-drop enqueue; starts transmission when the port is idle."""
        if self.q + pkt.size > self.buffer_bytes:
            self.drop_count += 1
            self.dropped_bytes += pkt.size
            return EnqueueResult.DROPPED

        self.queue.append(pkt)
        self.q += pkt.size
        self.enqueued_bytes += pkt.size
        if not self.busy:
            self._start_next()
        return EnqueueResult.ACCEPTED

    def _start_next(self) -> None:
        if not self.queue:
            return
        self.busy = True
        if self.sim is None:
            return
        self.busy_since_ns = self.sim.now_ns
        head = self.queue[0]
        self.sim.schedule(SimEvent(
            self.sim.now_ns + self.tx_time_ns(head.size),
            EventKind.PACKET_DEPARTURE,
            self._on_departure,
        ))

    def _on_departure(self, event: SimEvent) -> None:
        pkt = self.complete_transmission()
        if self.sim is not None:
            self.busy_ns += self.sim.now_ns - self.busy_since_ns
        if self.on_departure is not None:
            self.on_departure(pkt)
        self._start_next()

    def complete_transmission(self) -> Packet:
        """Remove the head packet from the queue and account for it."""
        pkt = self.queue.popleft()
        self.q -= pkt.size
        self.departed_bytes += pkt.size
        self.busy = False
        return pkt

    def maybe_sample(self, pkt: Packet) -> FeedbackFrame | None:
        """Bernoulli(p) sample of an arriving packet.

        One uniform draw is consumed per call. A success addressed to the same
        source as the previous frame is suppressed and leaves the sample state
        untouched.
        """
        if not self.rng.bernoulli(self.p):
            return None
        if self.dedup and pkt.src == self.last_feedback_dst:
            self.frames_suppressed += 1
            return None

        self.samples += 1
        qf = (self.q - self.q0_packets * self.packet_size) / self.packet_size
        dq = (self.q - self.q_last_sample) / self.packet_size
        self.q_last_sample = self.q

        if self.mode is CpMode.ASM:
            payload: AsmFeedback | QcnFeedback = AsmFeedback(
                quantize(qf, self.qf_scale), quantize(dq, self.dq_scale)
            )
        else:
            fb = compute_fb(qf, dq, self.w)
            if fb >= 0:
                return None
            payload = QcnFeedback(quantize_fb_magnitude(fb, self.fb_scale))

        frame = FeedbackFrame(self.cpid, pkt.src, payload)
        self.last_feedback_dst = pkt.src
        self.last_frame = frame
        self.frames_emitted += 1
        return frame

    def conservation_holds(self) -> bool:
        return self.q == self.enqueued_bytes - self.departed_bytes and 0 <= self.q <= self.buffer_bytes
