"""Paced traffic sources driven by a reaction point, and sinks.

A source sends back-to-back packets spaced by size*8/r. A new rate
reschedules the pending send from the last send time (never earlier than
now); the packet already on the wire is not affected.
"""
import logging
from typing import Callable

from qausim.core.constants import NS_PER_S
from qausim.cp.feedback import AsmFeedback, FeedbackFrame, QcnFeedback
from qausim.cp.port import Packet
from qausim.engine import EventHandle, EventKind, SimEvent, Simulator
from qausim.rp.asm import AsmParams, AsmRpState, on_feedback
from qausim.rp.qcn import (
    CycleTrigger,
    QcnParams,
    QcnRpState,
    on_transmit,
    qcn_cycle_complete,
    qcn_rate_decrease,
    timer_period_ns,
)
from qausim.topology.spec import FlowSpec

logger = logging.getLogger("qausim.network")


class FlowSource:
    """One flow's sender. Subclasses plug in the rate limiter."""

    def __init__(self, index: int, flow: FlowSpec, nic_capacity: float,
                 path: tuple[str, ...], sim: Simulator, emit: Callable[[Packet], None]):
        self.index = index
        self.flow = flow
        self.nic_capacity = nic_capacity
        self.path = path
        self.sim = sim
        self.emit = emit
        self.active = False
        self.last_send_ns: int | None = None
        self.sent_bytes = 0
        self.sent_packets = 0
        self.frames_received = 0
        self._next: EventHandle | None = None

    @property
    def flow_id(self) -> str:
        return self.flow.flow_id

    @property
    def rate_bps(self) -> float:
        raise NotImplementedError

    def gap_ns(self) -> int:
        return max(1, int(round(self.flow.packet_size_bytes * 8 * NS_PER_S / self.rate_bps)))

    # -- lifecycle ------------------------------------------------------------

    def start(self, event: SimEvent | None = None) -> None:
        self.active = True
        self._schedule_send(self.sim.now_ns)
        logger.debug("flow %s started at %d ns", self.flow_id, self.sim.now_ns)

    def stop(self, event: SimEvent | None = None) -> None:
        self.active = False
        if self._next is not None:
            self._next.cancel()
            self._next = None
        logger.debug("flow %s stopped at %d ns", self.flow_id, self.sim.now_ns)

    # -- sending --------------------------------------------------------------

    def _schedule_send(self, at_ns: int) -> None:
        self._next = self.sim.at(max(at_ns, self.sim.now_ns), EventKind.PACKET_DEPARTURE,
                                 self._send)

    def _send(self, event: SimEvent) -> None:
        if not self.active:
            return
        now = self.sim.now_ns
        size = self.flow.packet_size_bytes
        # flows own their sink, so the flow index addresses both ends
        pkt = Packet(self.index, self.index, self.index, size, self.path, 0, now)
        self.last_send_ns = now
        self.sent_bytes += size
        self.sent_packets += 1
        self.emit(pkt)
        self.after_transmit(size)
        self._schedule_send(now + self.gap_ns())

    def rate_changed(self) -> None:
        """Move the pending send to match the new rate."""
        if not self.active or self._next is None or self.last_send_ns is None:
            return
        self._next.cancel()
        self._schedule_send(self.last_send_ns + self.gap_ns())

    # -- hooks ----------------------------------------------------------------

    def after_transmit(self, size: int) -> None:
        pass

    def on_feedback(self, frame: FeedbackFrame) -> None:
        raise NotImplementedError


class AsmSource(FlowSource):
    def __init__(self, *args, params: AsmParams, **kwargs):
        super().__init__(*args, **kwargs)
        self.params = params
        self.rp = AsmRpState(
            r=min(self.flow.initial_rate_bps, self.nic_capacity),
            nic_capacity=self.nic_capacity,
            r_min=min(params.r_min, self.flow.initial_rate_bps),
        )

    @property
    def rate_bps(self) -> float:
        return self.rp.r

    def on_feedback(self, frame: FeedbackFrame) -> None:
        if not self.active:
            return
        self.frames_received += 1
        before = self.rp.r
        if not isinstance(frame.payload, AsmFeedback):
            self.rp.malformed += 1
            return
        on_feedback(frame, self.rp, self.params)
        if self.rp.r != before:
            self.rate_changed()


class QcnSource(FlowSource):
    def __init__(self, *args, params: QcnParams, **kwargs):
        super().__init__(*args, **kwargs)
        self.params = params
        self.rp = QcnRpState(r=min(self.flow.initial_rate_bps, self.nic_capacity),
                             nic_capacity=self.nic_capacity)
        self._timer: EventHandle | None = None
        self.malformed = 0

    @property
    def rate_bps(self) -> float:
        return self.rp.r

    def stop(self, event: SimEvent | None = None) -> None:
        super().stop(event)
        self._cancel_timer()

    def _cancel_timer(self) -> None:
        if self._timer is not None:
            self._timer.cancel()
            self._timer = None

    def _arm_timer(self) -> None:
        self._cancel_timer()
        self._timer = self.sim.after(timer_period_ns(self.rp, self.params),
                                     EventKind.TIMER_EXPIRY, self._on_timer)

    def _on_timer(self, event: SimEvent) -> None:
        self._timer = None
        if not self.active or not self.rp.active:
            return
        qcn_cycle_complete(self.rp, self.params, CycleTrigger.TIMER)
        self.rate_changed()
        self._arm_timer()

    def after_transmit(self, size: int) -> None:
        on_transmit(self.rp, size, self.params)

    def on_feedback(self, frame: FeedbackFrame) -> None:
        if not self.active:
            return
        self.frames_received += 1
        if not isinstance(frame.payload, QcnFeedback):
            self.malformed += 1
            return
        rd_before = self.rp.rd_count
        qcn_rate_decrease(self.rp, frame.payload.fb_code, self.params)
        if self.rp.rd_count != rd_before:
            self.rate_changed()
            self._arm_timer()


class Sink:
    """Counts delivered bytes per flow index."""

    def __init__(self, host: str):
        self.host = host
        self.delivered_bytes: dict[int, int] = {}
        self.delivered_packets = 0

    def receive(self, pkt: Packet) -> None:
        self.delivered_bytes[pkt.flow_id] = self.delivered_bytes.get(pkt.flow_id, 0) + pkt.size
        self.delivered_packets += 1

    @property
    def total_bytes(self) -> int:
        return sum(self.delivered_bytes.values())
