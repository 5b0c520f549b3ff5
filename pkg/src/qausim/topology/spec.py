"""Scenario description types.

A scenario is a set of undirected links between named nodes, a set of
flows between hosts, and the congestion-control algorithm with its
parameters. Nodes that appear as a flow source or sink are hosts; every
other node is a switch. All times are integer nanoseconds.
"""
from dataclasses import dataclass, field
from enum import Enum

from qausim.core.constants import (
    ASM_DEFAULT_B0,
    BAND_Q0_FRACTION,
    DEFAULT_BUFFER_BYTES,
    DEFAULT_Q0_PACKETS,
    NS_PER_S,
    PACKET_SIZE_BYTES,
    TRACE_HIGH_SPEED_BPS,
    TRACE_PERIOD_HIGH_SPEED_NS,
    TRACE_PERIOD_NS,
)
from qausim.rp.asm import AsmParams
from qausim.rp.qcn import QcnParams


class ConfigError(ValueError):
    """Scenario text could not be parsed."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None,
                 section: str | None = None, key: str | None = None):
        self.path = path
        self.line = line
        self.section = section
        self.key = key
        where = [p for p in (
            path,
            f"line {line}" if line is not None else None,
            f"[{section}]" if section else None,
            key,
        ) if p]
        super().__init__(f"{': '.join(where)}: {message}" if where else message)


class ValidationError(ConfigError):
    """A parsed scenario violates an invariant."""

    def __init__(self, invariant: str, message: str, **where):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}", **where)


class Algorithm(Enum):
    ASM = "asm"
    QCN = "qcn"


@dataclass(frozen=True)
class LinkSpec:
    link_id: str
    a: str
    b: str
    capacity_bps: float
    delay_ns: int

    def __post_init__(self):
        if self.capacity_bps <= 0:
            raise ValidationError("link capacity > 0",
                                  f"{self.link_id} has capacity {self.capacity_bps}")
        if self.delay_ns < 0:
            raise ValidationError("link delay >= 0", f"{self.link_id} has delay {self.delay_ns}")
        if self.a == self.b:
            raise ValidationError("distinct link endpoints", f"{self.link_id} loops on {self.a}")

    @property
    def delay_s(self) -> float:
        return self.delay_ns / NS_PER_S

    @property
    def endpoints(self) -> tuple[str, str]:
        return self.a, self.b


@dataclass(frozen=True)
class FlowSpec:
    flow_id: str
    source: str
    sink: str
    start_ns: int
    initial_rate_bps: float
    stop_ns: int | None = None
    packet_size_bytes: int = PACKET_SIZE_BYTES

    def __post_init__(self):
        if self.start_ns < 0:
            raise ValidationError("flow start >= 0", f"{self.flow_id} starts at {self.start_ns}")
        if self.stop_ns is not None and self.stop_ns <= self.start_ns:
            raise ValidationError(
                "flow start < stop",
                f"{self.flow_id}: start {self.start_ns} ns, stop {self.stop_ns} ns",
            )
        if self.initial_rate_bps <= 0:
            raise ValidationError("initial rate > 0",
                                  f"{self.flow_id} rate {self.initial_rate_bps}")
        if self.packet_size_bytes <= 0:
            raise ValidationError("packet size > 0", f"{self.flow_id}")
        if self.source == self.sink:
            raise ValidationError("distinct flow endpoints", f"{self.flow_id}")


@dataclass(frozen=True)
class TraceConfig:
    period_ns: int = TRACE_PERIOD_NS

    def __post_init__(self):
        if self.period_ns <= 0:
            raise ValidationError("trace period > 0", f"got {self.period_ns}")

    @classmethod
    def for_capacity(cls, capacity_bps: float) -> "TraceConfig":
        if capacity_bps > TRACE_HIGH_SPEED_BPS:
            return cls(TRACE_PERIOD_HIGH_SPEED_NS)
        return cls(TRACE_PERIOD_NS)


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    algorithm: Algorithm
    links: tuple[LinkSpec, ...]
    flows: tuple[FlowSpec, ...]
    duration_ns: int
    asm: AsmParams | None = None
    qcn: QcnParams | None = None
    buffer_bytes: int = DEFAULT_BUFFER_BYTES
    q0_packets: float = DEFAULT_Q0_PACKETS
    packet_size_bytes: int = PACKET_SIZE_BYTES
    seed: int = 1
    trace: TraceConfig = field(default_factory=TraceConfig)

    def __post_init__(self):
        if not self.links:
            raise ValidationError("at least one link", self.name)
        if self.duration_ns <= 0:
            raise ValidationError("duration > 0", f"got {self.duration_ns}")
        if self.q0_packets * self.packet_size_bytes >= self.buffer_bytes:
            raise ValidationError(
                "q0 * packet_size < buffer_size",
                f"{self.q0_packets} * {self.packet_size_bytes} >= {self.buffer_bytes}",
            )
        if self.algorithm is Algorithm.ASM and self.asm is None:
            raise ValidationError("algorithm parameters present", "ASM scenario without [asm]")
        if self.algorithm is Algorithm.QCN and self.qcn is None:
            raise ValidationError("algorithm parameters present", "QCN scenario without [qcn]")
        ids = [link.link_id for link in self.links]
        if len(set(ids)) != len(ids):
            raise ValidationError("unique link ids", ", ".join(ids))
        ids = [flow.flow_id for flow in self.flows]
        if len(set(ids)) != len(ids):
            raise ValidationError("unique flow ids", ", ".join(ids))

    @property
    def algorithm_params(self) -> AsmParams | QcnParams:
        return self.asm if self.algorithm is Algorithm.ASM else self.qcn

    @property
    def hosts(self) -> list[str]:
        seen: dict[str, None] = {}
        for flow in self.flows:
            seen.setdefault(flow.source)
            seen.setdefault(flow.sink)
        return list(seen)

    @property
    def nodes(self) -> list[str]:
        seen: dict[str, None] = {}
        for link in self.links:
            seen.setdefault(link.a)
            seen.setdefault(link.b)
        return list(seen)

    @property
    def switches(self) -> list[str]:
        hosts = set(self.hosts)
        return [n for n in self.nodes if n not in hosts]

    @property
    def reference_capacity_bps(self) -> float:
        """Capacity the ASM coefficients are scaled against: the slowest link."""
        return min(link.capacity_bps for link in self.links)

    @property
    def band_packets(self) -> float:
        """Convergence band around q0: max(B_0, 10% of q0)."""
        b0 = self.asm.b_0 * self.asm.qf_scale if self.asm is not None else ASM_DEFAULT_B0
        return max(b0, BAND_Q0_FRACTION * self.q0_packets)

    def nic_capacity(self, host: str) -> float:
        """Capacity of the first link attached to a host."""
        for link in self.links:
            if host in link.endpoints:
                return link.capacity_bps
        raise ValidationError("host attached to a link", f"{host} has no link")

    def flow(self, flow_id: str) -> FlowSpec:
        for f in self.flows:
            if f.flow_id == flow_id:
                return f
        raise KeyError(flow_id)
