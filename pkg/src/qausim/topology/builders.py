"""Programmatic scenario builders: dumbbell and parking lot."""
import math
from dataclasses import replace

from qausim.core.constants import (
    ASM_DEFAULT_CAPS,
    DEFAULT_BUFFER_BYTES,
    DEFAULT_CAPACITY_BPS,
    DEFAULT_LINK_DELAY_NS,
    DEFAULT_Q0_PACKETS,
    DESK_WINDOW_MIN_NS,
    DESK_WINDOW_NS,
    DQ_SCALE_RATIO,
    NS_PER_S,
    PACKET_SIZE_BYTES,
)
from qausim.cp.feedback import qf_scale_for
from qausim.engine.rng import RngStream
from qausim.rp.asm import COEFFICIENT_NAMES, AsmParams
from qausim.rp.qcn import QcnParams

from .spec import Algorithm, FlowSpec, LinkSpec, ScenarioSpec, TraceConfig

# Parking-lot flow schedule (seconds): fixed flows, then flows that start
# uniformly in a window and last a fixed time
PARKING_FIXED = {"f1": (0.0, 5.0), "f4": (3.0, 4.0), "f5": (4.0, 5.0)}
PARKING_RANDOM = {"f2": (0.0, 3.0, 1.0), "f3": (0.0, 3.0, 1.0)}
PARKING_ROUTES = {
    "f1": ("sw1", "sw4"),
    "f2": ("sw1", "sw2"),
    "f3": ("sw2", "sw3"),
    "f4": ("sw3", "sw4"),
    "f5": ("sw2", "sw4"),
}


def desk_window_ns(capacity_bps: float) -> int:
    """Default simulated time: 300 ms at 1 Gbps, shrinking with C, never under 20 ms."""
    if capacity_bps <= DEFAULT_CAPACITY_BPS:
        return DESK_WINDOW_NS
    scaled = int(DESK_WINDOW_NS * DEFAULT_CAPACITY_BPS / capacity_bps)
    return max(DESK_WINDOW_MIN_NS, scaled)


def default_asm_params(capacity_bps: float, buffer_bytes: int = DEFAULT_BUFFER_BYTES,
                       packet_size: int = PACKET_SIZE_BYTES,
                       caps=ASM_DEFAULT_CAPS, **kwargs) -> AsmParams:
    """Cap-derived ASM parameters with quantization scales for the buffer."""
    qf_scale = qf_scale_for(buffer_bytes, packet_size)
    kwargs.setdefault("qf_scale", float(qf_scale))
    kwargs.setdefault("dq_scale", qf_scale * DQ_SCALE_RATIO)
    return AsmParams.from_caps(capacity_bps, caps, **kwargs)


def random_start(seed: int, flow_id: str, low_ns: int, high_ns: int) -> int:
    """Seeded uniform start time in [low, high); one stream per flow id."""
    rng = RngStream(seed, f"scenario.{flow_id}")
    return low_ns + int(math.floor(rng.uniform() * (high_ns - low_ns)))


def _algorithm_kwargs(algorithm: Algorithm, capacity_bps: float, buffer_bytes: int,
                      packet_size: int, asm: AsmParams | None,
                      qcn: QcnParams | None) -> dict:
    if algorithm is Algorithm.ASM:
        return {"asm": asm or default_asm_params(capacity_bps, buffer_bytes, packet_size)}
    return {"qcn": qcn or QcnParams()}


def build_dumbbell(n_sources: int, capacity_bps: float = DEFAULT_CAPACITY_BPS,
                   delay_s: float = DEFAULT_LINK_DELAY_NS / NS_PER_S,
                   algorithm: Algorithm = Algorithm.ASM,
                   q0_packets: float = DEFAULT_Q0_PACKETS,
                   buffer_bytes: int = DEFAULT_BUFFER_BYTES,
                   packet_size: int = PACKET_SIZE_BYTES,
                   initial_rate_bps: float | None = None,
                   duration_ns: int | None = None,
                   seed: int = 1,
                   name: str | None = None,
                   asm: AsmParams | None = None,
                   qcn: QcnParams | None = None) -> ScenarioSpec:
    """n sources -> sw1 -> d1, identical links, all flows start at 0.

    The default initial rate is half the link capacity.
    """
    if n_sources < 1:
        raise ValueError(f"n_sources must be >= 1, got {n_sources}")
    delay_ns = int(round(delay_s * NS_PER_S))
    rate = capacity_bps / 2 if initial_rate_bps is None else initial_rate_bps

    links = [LinkSpec(f"l{i}", f"s{i}", "sw1", capacity_bps, delay_ns)
             for i in range(1, n_sources + 1)]
    links.append(LinkSpec("l0", "sw1", "d1", capacity_bps, delay_ns))
    flows = [FlowSpec(f"f{i}", f"s{i}", "d1", 0, rate, packet_size_bytes=packet_size)
             for i in range(1, n_sources + 1)]

    return ScenarioSpec(
        name=name or f"dumbbell{n_sources}",
        algorithm=algorithm,
        links=tuple(links),
        flows=tuple(flows),
        duration_ns=duration_ns or desk_window_ns(capacity_bps),
        buffer_bytes=buffer_bytes,
        q0_packets=q0_packets,
        packet_size_bytes=packet_size,
        seed=seed,
        trace=TraceConfig.for_capacity(capacity_bps),
        **_algorithm_kwargs(algorithm, capacity_bps, buffer_bytes, packet_size, asm, qcn),
    )


def build_parking_lot(capacity_bps: float = DEFAULT_CAPACITY_BPS,
                      delay_s: float = DEFAULT_LINK_DELAY_NS / NS_PER_S,
                      algorithm: Algorithm = Algorithm.ASM,
                      q0_packets: float = DEFAULT_Q0_PACKETS,
                      buffer_bytes: int = DEFAULT_BUFFER_BYTES,
                      packet_size: int = PACKET_SIZE_BYTES,
                      seed: int = 1,
                      time_scale: float = 1.0,
                      asm: AsmParams | None = None,
                      qcn: QcnParams | None = None) -> ScenarioSpec:
    """Four switches in a chain with five flows.

    F1 crosses sw1..sw4; F2, F3 and F4 each cross one switch-to-switch
    link; F5 crosses sw2..sw4. `time_scale` shrinks the flow schedule for
    quick runs.
    """
    delay_ns = int(round(delay_s * NS_PER_S))
    links = [LinkSpec(f"c{i}", f"sw{i}", f"sw{i + 1}", capacity_bps, delay_ns)
             for i in range(1, 4)]
    for flow_id, (ingress, egress) in PARKING_ROUTES.items():
        i = flow_id[1:]
        links.append(LinkSpec(f"ls{i}", f"s{i}", ingress, capacity_bps, delay_ns))
        links.append(LinkSpec(f"ld{i}", egress, f"d{i}", capacity_bps, delay_ns))

    def ns(seconds: float) -> int:
        return int(round(seconds * time_scale * NS_PER_S))

    times: dict[str, tuple[int, int]] = {}
    for flow_id, (start, stop) in PARKING_FIXED.items():
        times[flow_id] = (ns(start), ns(stop))
    for flow_id, (low, high, length) in PARKING_RANDOM.items():
        start = random_start(seed, flow_id, ns(low), ns(high))
        times[flow_id] = (start, start + ns(length))

    flows = []
    for flow_id in sorted(PARKING_ROUTES):
        i = flow_id[1:]
        start, stop = times[flow_id]
        flows.append(FlowSpec(flow_id, f"s{i}", f"d{i}", start, capacity_bps / 2,
                              stop_ns=stop, packet_size_bytes=packet_size))

    return ScenarioSpec(
        name="parkinglot",
        algorithm=algorithm,
        links=tuple(links),
        flows=tuple(flows),
        duration_ns=max(stop for _, stop in times.values()),
        buffer_bytes=buffer_bytes,
        q0_packets=q0_packets,
        packet_size_bytes=packet_size,
        seed=seed,
        trace=TraceConfig.for_capacity(capacity_bps),
        **_algorithm_kwargs(algorithm, capacity_bps, buffer_bytes, packet_size, asm, qcn),
    )


def with_capacity(spec: ScenarioSpec, capacity_bps: float) -> ScenarioSpec:
    """Same scenario with every link at `capacity_bps`.

    Initial rates and ASM coefficients scale with the capacity; the trace
    period and the simulated window follow the new speed.
    """
    factor = capacity_bps / spec.reference_capacity_bps
    kwargs = {}
    if spec.asm is not None:
        kwargs["asm"] = spec.asm.scaled(**{name: factor for name in COEFFICIENT_NAMES})
    return replace(
        spec,
        name=f"{spec.name}@{capacity_bps / 1e9:g}G",
        links=tuple(replace(link, capacity_bps=capacity_bps) for link in spec.links),
        flows=tuple(replace(f, initial_rate_bps=f.initial_rate_bps * factor) for f in spec.flows),
        duration_ns=desk_window_ns(capacity_bps),
        trace=TraceConfig.for_capacity(capacity_bps),
        **kwargs,
    )


def with_link_delay(spec: ScenarioSpec, delay_ns: int) -> ScenarioSpec:
    """Same scenario with every link's propagation delay set to `delay_ns`."""
    return replace(
        spec,
        name=f"{spec.name}+{delay_ns}ns",
        links=tuple(replace(link, delay_ns=delay_ns) for link in spec.links),
    )
