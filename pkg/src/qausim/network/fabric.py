"""Scenario wiring: switches, sources, sinks, feedback delivery and tracing.

Every switch egress port that carries at least one flow is a congestion
point. Packets are store-and-forward: a port's departure hands the packet to
the link, which delivers it to the next node after the propagation delay.
Feedback frames travel back to the source over the reverse path, encoded to
wire bytes and decoded on delivery.
"""
import logging

from qausim.core.constants import NS_PER_S
from qausim.cp import CpMode, MalformedFrame, Packet, SwitchPort, decode_frame, encode_frame
from qausim.engine import EventKind, RngStream, SimEvent, Simulator, SimSummary
from qausim.topology import (
    Algorithm,
    EgressPort,
    ScenarioSpec,
    bottleneck_port,
    build_graph,
    egress_ports,
    flow_paths,
)
from qausim.topology.routing import port_flow_counts
from qausim.trace import Trace, TraceRecorder

from .sources import AsmSource, FlowSource, QcnSource, Sink

logger = logging.getLogger("qausim.network")


class Network:
    """One runnable simulation of a scenario. Build, then call run()."""

    def __init__(self, spec: ScenarioSpec):
        self.spec = spec
        self.sim = Simulator()
        graph = build_graph(spec)
        self.paths = flow_paths(spec, graph)
        counts = port_flow_counts(spec, self.paths)

        self.delays: dict[tuple[str, str], int] = {}
        for link in spec.links:
            self.delays[(link.a, link.b)] = link.delay_ns
            self.delays[(link.b, link.a)] = link.delay_ns

        params = spec.algorithm_params
        mode = CpMode.ASM if spec.algorithm is Algorithm.ASM else CpMode.QCN
        self.ports: dict[tuple[str, str], SwitchPort] = {}
        self.egress: list[EgressPort] = []
        for ep in egress_ports(spec):
            if counts[(ep.node, ep.peer)] == 0:
                continue
            self.egress.append(ep)
            self.ports[(ep.node, ep.peer)] = SwitchPort(
                cpid=ep.cpid,
                capacity_bps=ep.capacity_bps,
                buffer_bytes=spec.buffer_bytes,
                q0_packets=spec.q0_packets,
                w=params.w,
                p=params.p,
                mode=mode,
                rng=RngStream(spec.seed, f"cp.{ep.name}"),
                packet_size=spec.packet_size_bytes,
                sim=self.sim,
                on_departure=self._forward,
                name=ep.name,
            )

        self.sinks = {flow.sink: Sink(flow.sink) for flow in spec.flows}
        self.sources: list[FlowSource] = []
        for index, flow in enumerate(spec.flows):
            args = (index, flow, spec.nic_capacity(flow.source), self.paths[flow.flow_id],
                    self.sim, self._emit)
            if spec.algorithm is Algorithm.ASM:
                source: FlowSource = AsmSource(*args, params=spec.asm)
            else:
                source = QcnSource(*args, params=spec.qcn)
            self.sources.append(source)

        bottleneck = bottleneck_port(spec, self.paths)
        traced = [self.ports[(ep.node, ep.peer)] for ep in self.egress]
        self.traced_ports = traced
        self.bottleneck = self.ports[(bottleneck.node, bottleneck.peer)]
        self.recorder = TraceRecorder(
            [p.name for p in traced],
            [f.flow_id for f in spec.flows],
            traced.index(self.bottleneck),
            spec.q0_packets,
            bottleneck.capacity_bps,
        )
        self.frames_delivered = 0
        self.frames_malformed = 0
        self._schedule_lifecycle()

    # -- setup ----------------------------------------------------------------

    def _schedule_lifecycle(self) -> None:
        end = self.spec.duration_ns
        for source in self.sources:
            flow = source.flow
            if flow.start_ns <= end:
                self.sim.at(flow.start_ns, EventKind.FLOW_START, source.start)
            if flow.stop_ns is not None and flow.stop_ns <= end:
                self.sim.at(flow.stop_ns, EventKind.FLOW_STOP, source.stop)
        self.sim.at(0, EventKind.TRACE_SAMPLE, self._sample)

    # -- data path ------------------------------------------------------------

    def _emit(self, pkt: Packet) -> None:
        """Source NIC serialization plus the first link."""
        source = self.sources[pkt.flow_id]
        tx_ns = int(round(pkt.size * 8 * NS_PER_S / source.nic_capacity))
        self._send_over_link(pkt, tx_ns)

    def _forward(self, pkt: Packet) -> None:
        self._send_over_link(pkt, 0)

    def _send_over_link(self, pkt: Packet, extra_ns: int) -> None:
        here, nxt = pkt.path[pkt.hop], pkt.path[pkt.hop + 1]
        pkt.hop += 1
        self.sim.after(extra_ns + self.delays[(here, nxt)], EventKind.PACKET_ARRIVAL,
                       self._arrive, pkt)

    def _arrive(self, event: SimEvent) -> None:
        pkt: Packet = event.payload
        node = pkt.path[pkt.hop]
        if pkt.hop == len(pkt.path) - 1:
            self.sinks[node].receive(pkt)
            return
        port = self.ports[(node, pkt.path[pkt.hop + 1])]
        frame = port.maybe_sample(pkt)
        if frame is not None:
            back_ns = sum(self.delays[(pkt.path[i + 1], pkt.path[i])] for i in range(pkt.hop))
            self.sim.after(back_ns, EventKind.FEEDBACK_DELIVERY, self._deliver_feedback,
                           encode_frame(frame))
        port.enqueue(pkt)

    def _deliver_feedback(self, event: SimEvent) -> None:
        try:
            frame = decode_frame(event.payload)
        except MalformedFrame as exc:
            self.frames_malformed += 1
            logger.warning("dropping malformed feedback frame: %s", exc)
            return
        self.frames_delivered += 1
        self.sources[frame.dst].on_feedback(frame)

    # -- tracing --------------------------------------------------------------

    def _sample(self, event: SimEvent) -> None:
        self.recorder.sample(self.sim.now_ns, self.traced_ports, self.sources)
        nxt = self.sim.now_ns + self.spec.trace.period_ns
        if nxt <= self.spec.duration_ns:
            self.sim.at(nxt, EventKind.TRACE_SAMPLE, self._sample)

    # -- results --------------------------------------------------------------

    def run(self) -> SimSummary:
        summary = self.sim.run_until_ns(self.spec.duration_ns)
        logger.info("%s: %d events, %d frames delivered, %d drops",
                    self.spec.name, summary.events_dispatched, self.frames_delivered,
                    sum(p.drop_count for p in self.ports.values()))
        return summary

    @property
    def trace(self) -> Trace:
        return self.recorder.trace

    @property
    def delivered_bytes(self) -> int:
        return sum(s.total_bytes for s in self.sinks.values())

    def conservation_holds(self) -> bool:
        return all(p.conservation_holds() for p in self.ports.values())
